#include "eprsim/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "eprsim/oracle.hpp"

namespace eprsim {

using Json = nlohmann::ordered_json;

void validate(const BellConfig& config) {
  for (double angle : {config.a_rad, config.b_rad, config.c_rad}) {
    if (!std::isfinite(angle)) {
      throw std::invalid_argument("angles must be finite");
    }
  }
  if (config.n_trials == 0) {
    throw std::invalid_argument("n_trials must be at least 1");
  }
}

std::array<wire::RunManifest, 3> run_manifests(const BellConfig& config) {
  const auto plan = plan_experiments(config.a(), config.b(), config.c(),
                                     config.seed, config.share_stream);
  std::array<wire::RunManifest, 3> out;
  for (std::size_t k = 0; k < plan.size(); ++k) {
    const ExperimentSpec& e = plan[k];
    out[k] = {"bell-" + std::to_string(config.seed) + "-" +
                  std::string(tag_name(e.tag)),
              e.seed,
              config.n_trials,
              e.setting1.angle_rad(),
              e.setting2.angle_rad(),
              e.tag};
  }
  return out;
}

Json config_to_json(const BellConfig& c) {
  return Json{{"a_rad", c.a_rad},         {"b_rad", c.b_rad},
              {"c_rad", c.c_rad},         {"n_trials", c.n_trials},
              {"seed", c.seed},           {"share_stream", c.share_stream}};
}

BellConfig config_from_json(const Json& j) {
  BellConfig c;
  c.a_rad = j.at("a_rad").get<double>();
  c.b_rad = j.at("b_rad").get<double>();
  c.c_rad = j.at("c_rad").get<double>();
  c.n_trials = j.at("n_trials").get<std::uint64_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.share_stream = j.at("share_stream").get<bool>();
  validate(c);
  return c;
}

Json manifest_to_json(const wire::RunManifest& m) {
  return Json{{"run_id", m.run_id},
              {"seed", m.seed},
              {"n_trials", m.n_trials},
              {"setting1", m.setting1},
              {"setting2", m.setting2},
              {"experiment_tag", std::string(tag_name(m.experiment_tag))}};
}

wire::RunManifest manifest_from_json(const Json& j) {
  wire::RunManifest m{j.at("run_id").get<std::string>(),
                      j.at("seed").get<std::uint64_t>(),
                      j.at("n_trials").get<std::uint64_t>(),
                      j.at("setting1").get<double>(),
                      j.at("setting2").get<double>(),
                      tag_from_name(j.at("experiment_tag").get<std::string>())};
  for (double s : {m.setting1, m.setting2}) {
    if (!(s >= 0.0 && s < kTwoPi)) {
      throw std::invalid_argument("manifest settings must lie in [0, 2pi)");
    }
  }
  return m;
}

ExperimentRuns run_bell_local(const BellConfig& config) {
  validate(config);
  const auto plan = plan_experiments(config.a(), config.b(), config.c(),
                                     config.seed, config.share_stream);
  std::array<std::vector<TrialRecord>, 3> runs;
  for (std::size_t k = 0; k < plan.size(); ++k) {
    const std::vector<TrialPoint> points = stream({plan[k].seed, config.n_trials});
    runs[k] = run_experiment(points, plan[k].setting1, plan[k].setting2);
  }
  return {std::move(runs[0]), std::move(runs[1]), std::move(runs[2])};
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_trial_csv(const std::vector<TrialRecord>& records) {
  std::string out = "trial,x,y,setting1_rad,setting2_rad,answer1,answer2\n";
  out.reserve(records.size() * 96);
  for (const TrialRecord& r : records) {
    out += std::to_string(r.trial_id);
    out += ',';
    out += format_real(r.point.x);
    out += ',';
    out += format_real(r.point.y);
    out += ',';
    out += format_real(r.setting1.angle_rad());
    out += ',';
    out += format_real(r.setting2.angle_rad());
    out += ',';
    out += std::to_string(r.answer1.value());
    out += ',';
    out += std::to_string(r.answer2.value());
    out += '\n';
  }
  return out;
}

namespace {

Json bell_json(const BellReport& r) {
  Json j{{"e_ab", r.e_ab}, {"e_cb", r.e_cb}, {"e_ac", r.e_ac},
         {"lhs", r.lhs},   {"rhs", r.rhs},   {"violation", r.violation}};
  if (r.combined_stderr) j["combined_stderr"] = *r.combined_stderr;
  if (r.mode == BellMode::kEmpirical) {
    j["z_score"] = r.z_score ? Json(*r.z_score) : Json(nullptr);
  }
  return j;
}

// Used only by the verifier; absolute tolerance for recomputed reals.
constexpr double kVerifyTolerance = 1e-12;

}  // namespace

Json bell_report_json(const BellConfig& config, const ExperimentRuns& runs) {
  const auto manifests = run_manifests(config);
  const BellReport exact = bell_report_exact(config.a(), config.b(), config.c());
  const BellReport empirical = bell_report_empirical(runs);

  Json report;
  report["config"] = config_to_json(config);
  report["seed_derivation"] =
      config.share_stream ? "experiments I, II, III share one stream from seed"
                          : "experiments I, II, III use seeds seed, seed+1, seed+2";
  Json experiments = Json::array();
  for (std::size_t k = 0; k < 3; ++k) {
    const wire::RunManifest& m = manifests[k];
    const CorrelationEstimate& e = (*empirical.estimates)[k];
    experiments.push_back(Json{
        {"tag", std::string(tag_name(m.experiment_tag))},
        {"run_id", m.run_id},
        {"seed", m.seed},
        {"setting1_rad", m.setting1},
        {"setting2_rad", m.setting2},
        {"n", e.n},
        {"product_sum", e.product_sum},
        {"value", e.value},
        {"stderr", e.std_error},
        {"exact", exact_corr(Direction::from_radians(m.setting1),
                             Direction::from_radians(m.setting2))}});
  }
  report["experiments"] = experiments;
  report["exact"] = bell_json(exact);
  report["empirical"] = bell_json(empirical);

  const ConcordanceComparison cc =
      concordance_comparison(config.a(), config.b(), config.c());
  report["concordance"] = Json{{"cb_minus_ab", cc.cb_minus_ab},
                               {"ca", cc.ca},
                               {"ac", cc.ac}};
  if (config.share_stream) {
    report["pointwise"] = Json{
        {"identity_holds_fraction", pointwise_identity_fraction(runs)},
        {"chameleon_bound_failure_fraction", chameleon_substitution_audit(runs)}};
  }
  report["reference_claim"] = Json{
      {"violation", kReferenceClaimedViolation},
      {"note",
       "A violation of 0.521 has been reported for the default "
       "angles. The semidisk response rule implemented here gives the exact "
       "value in exact.violation; the 0.521 magnitude is not reproduced."}};
  return report;
}

ReportCheck verify_report_json(const Json& report) {
  ReportCheck check;
  auto expect = [&](const std::string& what, double got, double want) {
    if (!(std::abs(got - want) <= kVerifyTolerance)) {
      check.ok = false;
      check.problems.push_back(what + ": report has " + format_real(got) +
                               ", recomputed " + format_real(want));
    }
  };
  auto check_bell = [&](const std::string& section, const Json& j) {
    const double e_ab = j.at("e_ab").get<double>();
    const double e_cb = j.at("e_cb").get<double>();
    const double e_ac = j.at("e_ac").get<double>();
    const BellReport r = bell_from_correlations(e_ab, e_cb, e_ac);
    expect(section + ".lhs", j.at("lhs").get<double>(), r.lhs);
    expect(section + ".rhs", j.at("rhs").get<double>(), r.rhs);
    expect(section + ".violation", j.at("violation").get<double>(), r.violation);
  };
  try {
    const BellConfig config = config_from_json(report.at("config"));
    const Json& exps = report.at("experiments");
    if (!exps.is_array() || exps.size() != 3) {
      check.ok = false;
      check.problems.push_back("experiments must list I, II, III");
      return check;
    }
    double values[3];
    double se2 = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
      const Json& e = exps[k];
      const std::string tag = e.at("tag").get<std::string>();
      const auto n = e.at("n").get<std::uint64_t>();
      const auto sum = e.at("product_sum").get<std::int64_t>();
      const double value = e.at("value").get<double>();
      const double se = e.at("stderr").get<double>();
      if (n == 0 || static_cast<std::uint64_t>(std::llabs(sum)) > n ||
          (n - static_cast<std::uint64_t>(std::llabs(sum))) % 2 != 0) {
        check.ok = false;
        check.problems.push_back(tag + ": product_sum inconsistent with n");
      }
      const double recomputed = static_cast<double>(sum) / static_cast<double>(n);
      expect(tag + ".value", value, recomputed);
      expect(tag + ".stderr", se,
             std::sqrt(std::max(0.0, 1.0 - recomputed * recomputed) /
                       static_cast<double>(n)));
      expect(tag + ".exact", e.at("exact").get<double>(),
             exact_corr(Direction::from_radians(e.at("setting1_rad").get<double>()),
                        Direction::from_radians(e.at("setting2_rad").get<double>())));
      values[k] = value;
      se2 += se * se;
    }
    const Json& emp = report.at("empirical");
    expect("empirical.e_ab", emp.at("e_ab").get<double>(), values[0]);
    expect("empirical.e_cb", emp.at("e_cb").get<double>(), values[1]);
    expect("empirical.e_ac", emp.at("e_ac").get<double>(), values[2]);
    check_bell("empirical", emp);
    const double combined = std::sqrt(se2);
    expect("empirical.combined_stderr", emp.at("combined_stderr").get<double>(),
           combined);
    if (combined > 0.0) {
      expect("empirical.z_score", emp.at("z_score").get<double>(),
             emp.at("violation").get<double>() / combined);
    }
    const Json& ex = report.at("exact");
    expect("exact.e_ab", ex.at("e_ab").get<double>(), exact_corr(config.a(), config.b()));
    expect("exact.e_cb", ex.at("e_cb").get<double>(), exact_corr(config.c(), config.b()));
    expect("exact.e_ac", ex.at("e_ac").get<double>(), exact_corr(config.a(), config.c()));
    check_bell("exact", ex);
  } catch (const std::exception& e) {
    check.ok = false;
    check.problems.push_back(std::string("malformed report: ") + e.what());
  }
  return check;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
  out.close();
  if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

}  // namespace

void write_artifacts(const BellConfig& config, const ExperimentRuns& runs,
                     const ArtifactPaths& paths) {
  write_file(paths.csv_dir / "experiment_I.csv", format_trial_csv(runs.run_i));
  write_file(paths.csv_dir / "experiment_II.csv", format_trial_csv(runs.run_ii));
  write_file(paths.csv_dir / "experiment_III.csv", format_trial_csv(runs.run_iii));
  write_file(paths.report, bell_report_json(config, runs).dump(2) + "\n");
}

}  // namespace eprsim
