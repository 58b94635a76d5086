#include "eprsim/experiment.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "eprsim/oracle.hpp"

namespace eprsim {

std::vector<TrialRecord> run_experiment(std::span<const TrialPoint> points,
                                        Direction setting1, Direction setting2,
                                        const ResponseRule& rule) {
  if (points.empty()) {
    throw std::invalid_argument("run_experiment: empty point stream");
  }
  const LocalObservable station1 = rule.bind(StationId::kStation1, setting1);
  const LocalObservable station2 = rule.bind(StationId::kStation2, setting2);
  std::vector<TrialRecord> records;
  records.reserve(points.size());
  for (const TrialPoint& tp : points) {
    if (!in_unit_disk(tp.point)) {
      throw std::invalid_argument("run_experiment: trial " +
                                  std::to_string(tp.trial_id) +
                                  " lies outside the unit disk");
    }
    records.push_back({tp.trial_id, tp.point, setting1, setting2,
                       station1(tp.point), station2(tp.point)});
  }
  return records;
}

CorrelationEstimate empirical_corr(std::span<const TrialRecord> records) {
  if (records.empty()) {
    throw std::invalid_argument("empirical_corr: no records");
  }
  std::int64_t sum = 0;
  for (const TrialRecord& r : records) {
    sum += (r.answer1 * r.answer2).value();
  }
  const double n = static_cast<double>(records.size());
  const double value = static_cast<double>(sum) / n;
  // Clamp guards the |value| == 1 case against a -0.0 inside the root.
  const double var = std::max(0.0, 1.0 - value * value);
  return {value, records.size(), std::sqrt(var / n), sum};
}

std::string_view tag_name(ExperimentTag tag) {
  switch (tag) {
    case ExperimentTag::kI:
      return "I";
    case ExperimentTag::kII:
      return "II";
    case ExperimentTag::kIII:
      return "III";
  }
  return "?";
}

ExperimentTag tag_from_name(std::string_view name) {
  if (name == "I") return ExperimentTag::kI;
  if (name == "II") return ExperimentTag::kII;
  if (name == "III") return ExperimentTag::kIII;
  throw std::invalid_argument("unknown experiment tag '" + std::string(name) +
                              "'");
}

std::array<ExperimentSpec, 3> plan_experiments(Direction a, Direction b,
                                               Direction c, std::uint64_t seed,
                                               bool share_stream) {
  const std::uint64_t step = share_stream ? 0 : 1;
  return {{
      {ExperimentTag::kI, a, b, seed},
      {ExperimentTag::kII, c, b, seed + step},
      {ExperimentTag::kIII, a, c, seed + 2 * step},
  }};
}

BellReport bell_from_correlations(double e_ab, double e_cb, double e_ac) {
  BellReport r;
  r.e_ab = e_ab;
  r.e_cb = e_cb;
  r.e_ac = e_ac;
  r.lhs = std::abs(e_ab - e_cb);
  r.rhs = 1.0 + e_ac;
  r.violation = r.lhs - r.rhs;
  return r;
}

BellReport bell_report_exact(Direction a, Direction b, Direction c) {
  BellReport r =
      bell_from_correlations(exact_corr(a, b), exact_corr(c, b), exact_corr(a, c));
  r.mode = BellMode::kExact;
  return r;
}

BellReport bell_report_empirical(const ExperimentRuns& runs) {
  if (runs.run_i.size() != runs.run_ii.size() ||
      runs.run_i.size() != runs.run_iii.size()) {
    throw std::invalid_argument("bell_report: mismatched trial counts (" +
                                std::to_string(runs.run_i.size()) + ", " +
                                std::to_string(runs.run_ii.size()) + ", " +
                                std::to_string(runs.run_iii.size()) + ")");
  }
  const std::array<CorrelationEstimate, 3> est{
      empirical_corr(runs.run_i), empirical_corr(runs.run_ii),
      empirical_corr(runs.run_iii)};
  BellReport r = bell_from_correlations(est[0].value, est[1].value, est[2].value);
  r.mode = BellMode::kEmpirical;
  r.estimates = est;
  const double combined =
      std::sqrt(est[0].std_error * est[0].std_error +
                est[1].std_error * est[1].std_error +
                est[2].std_error * est[2].std_error);
  r.combined_stderr = combined;
  if (combined > 0.0) {
    r.z_score = r.violation / combined;
  }
  return r;
}

PointwiseBell pointwise_bell_identity(Point p, Direction a, Direction b,
                                      Direction c) {
  const int s1a = station_response(StationId::kStation1, a, p).value();
  const int s2b = station_response(StationId::kStation2, b, p).value();
  const int s1c = station_response(StationId::kStation1, c, p).value();
  const double lhs = std::abs(s1a * s2b - s1c * s2b);
  const double rhs = 1.0 - s1a * s1c;
  return {lhs, rhs, lhs <= rhs};
}

namespace {

void require_shared_stream(const ExperimentRuns& runs) {
  const std::size_t n = runs.run_i.size();
  if (n == 0 || runs.run_ii.size() != n || runs.run_iii.size() != n) {
    throw std::invalid_argument("stream mismatch: runs differ in length");
  }
  for (std::size_t k = 0; k < n; ++k) {
    const TrialRecord& r1 = runs.run_i[k];
    const TrialRecord& r2 = runs.run_ii[k];
    const TrialRecord& r3 = runs.run_iii[k];
    if (r1.trial_id != r2.trial_id || r1.trial_id != r3.trial_id ||
        !(r1.point == r2.point) || !(r1.point == r3.point)) {
      throw std::invalid_argument("stream mismatch at position " +
                                  std::to_string(k) +
                                  ": runs do not share one point stream");
    }
  }
}

}  // namespace

double pointwise_identity_fraction(const ExperimentRuns& runs) {
  require_shared_stream(runs);
  std::uint64_t holds = 0;
  for (std::size_t k = 0; k < runs.run_i.size(); ++k) {
    const int s1a = runs.run_i[k].answer1.value();
    const int s2b = runs.run_i[k].answer2.value();
    const int s1c = runs.run_ii[k].answer1.value();
    if (std::abs(s1a * s2b - s1c * s2b) <= 1 - s1a * s1c) ++holds;
  }
  return static_cast<double>(holds) / static_cast<double>(runs.run_i.size());
}

double chameleon_substitution_audit(const ExperimentRuns& runs) {
  require_shared_stream(runs);
  std::uint64_t failing = 0;
  for (std::size_t k = 0; k < runs.run_i.size(); ++k) {
    const int prod_i = (runs.run_i[k].answer1 * runs.run_i[k].answer2).value();
    const int prod_ii = (runs.run_ii[k].answer1 * runs.run_ii[k].answer2).value();
    const int prod_iii =
        (runs.run_iii[k].answer1 * runs.run_iii[k].answer2).value();
    if (std::abs(prod_i - prod_ii) > 1 + prod_iii) ++failing;
  }
  return static_cast<double>(failing) / static_cast<double>(runs.run_i.size());
}

SingletAudit singlet_audit(std::uint64_t n, std::uint64_t seed,
                           Direction setting1, Direction setting2) {
  const std::vector<TrialPoint> points = stream({seed, n});
  const std::vector<TrialRecord> records =
      run_experiment(points, setting1, setting2);
  std::uint64_t failures = 0;
  for (const TrialRecord& r : records) {
    if ((r.answer1 * r.answer2).value() != -1) ++failures;
  }
  return {failures == 0, records.size(), failures};
}

SingletAudit singlet_audit(std::uint64_t n, std::uint64_t seed, Direction c) {
  return singlet_audit(n, seed, c, reflect(c));
}

}  // namespace eprsim
