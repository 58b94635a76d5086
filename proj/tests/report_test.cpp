#include "eprsim/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

using namespace eprsim;

namespace {

BellConfig small_config(bool share = false) {
  BellConfig c;
  c.n_trials = 2000;
  c.seed = 9;
  c.share_stream = share;
  return c;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Csv, SchemaAndRoundTripReals) {
  const ExperimentRuns runs = run_bell_local(small_config());
  const std::string csv = format_trial_csv(runs.run_ii);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "trial,x,y,setting1_rad,setting2_rad,answer1,answer2");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    const TrialRecord& r = runs.run_ii[rows];
    unsigned long long id;
    double x, y, s1, s2;
    int a1, a2;
    ASSERT_EQ(std::sscanf(line.c_str(), "%llu,%lf,%lf,%lf,%lf,%d,%d", &id, &x, &y, &s1, &s2,
                          &a1, &a2),
              7);
    EXPECT_EQ(id, r.trial_id);
    EXPECT_EQ(x, r.point.x);
    EXPECT_EQ(y, r.point.y);
    EXPECT_EQ(s1, 1.989675);
    EXPECT_EQ(s2, 0.3141593);
    EXPECT_EQ(a1, r.answer1.value());
    EXPECT_EQ(a2, r.answer2.value());
    ++rows;
  }
  EXPECT_EQ(rows, runs.run_ii.size());
}

TEST(Report, ContainsRecomputableNumbers) {
  const BellConfig c = small_config(true);
  const auto report = bell_report_json(c, run_bell_local(c));
  EXPECT_TRUE(verify_report_json(report).ok);
  EXPECT_NEAR(report["exact"]["violation"].get<double>(), 0.13333, 1e-4);
  EXPECT_EQ(report["reference_claim"]["violation"].get<double>(), 0.521);
  EXPECT_TRUE(report["reference_claim"]["note"].is_string());
  EXPECT_EQ(report["experiments"].size(), 3u);
  EXPECT_EQ(report["pointwise"]["identity_holds_fraction"].get<double>(), 1.0);
  EXPECT_TRUE(report.contains("concordance"));
  EXPECT_FALSE(report.contains("mode"));
}

TEST(Report, VerifierCatchesTampering) {
  const BellConfig c = small_config();
  auto report = bell_report_json(c, run_bell_local(c));
  auto tampered = report;
  tampered["empirical"]["violation"] = 0.5;
  EXPECT_FALSE(verify_report_json(tampered).ok);
  tampered = report;
  tampered["experiments"][1]["product_sum"] = tampered["experiments"][1]["product_sum"].get<std::int64_t>() + 2;
  EXPECT_FALSE(verify_report_json(tampered).ok);
  tampered = report;
  tampered["exact"]["e_ab"] = 0.7;
  EXPECT_FALSE(verify_report_json(tampered).ok);
  tampered = report;
  tampered.erase("exact");
  EXPECT_FALSE(verify_report_json(tampered).ok);
}

TEST(Report, DegenerateTripleGivesMinusTwo) {
  BellConfig c = small_config();
  c.a_rad = c.b_rad = c.c_rad = 0.7;
  const auto report = bell_report_json(c, run_bell_local(c));
  EXPECT_DOUBLE_EQ(report["exact"]["violation"].get<double>(), -2.0);
  EXPECT_DOUBLE_EQ(report["empirical"]["violation"].get<double>(), -2.0);
  EXPECT_TRUE(report["empirical"]["z_score"].is_null());
  EXPECT_TRUE(verify_report_json(report).ok);
}

TEST(Artifacts, LocalRunsAreByteIdentical) {
  const auto base = std::filesystem::temp_directory_path() / "eprsim_report_test";
  std::filesystem::remove_all(base);
  const BellConfig c = small_config();
  write_artifacts(c, run_bell_local(c), {base / "one/report.json", base / "one"});
  write_artifacts(c, run_bell_local(c), {base / "two/report.json", base / "two"});
  for (const char* f : {"report.json", "experiment_I.csv", "experiment_II.csv",
                        "experiment_III.csv"}) {
    const std::string one = slurp(base / "one" / f);
    EXPECT_FALSE(one.empty());
    EXPECT_EQ(one, slurp(base / "two" / f)) << f;
  }
  std::filesystem::remove_all(base);
}

TEST(Config, ValidationAndManifests) {
  BellConfig c;
  EXPECT_NO_THROW(validate(c));
  c.n_trials = 0;
  EXPECT_THROW(validate(c), std::invalid_argument);
  c = BellConfig{};
  c.b_rad = std::numeric_limits<double>::infinity();
  EXPECT_THROW(validate(c), std::invalid_argument);

  c = BellConfig{};
  c.c_rad = -1.0;
  const auto m = run_manifests(c);
  EXPECT_EQ(m[1].experiment_tag, ExperimentTag::kII);
  EXPECT_GE(m[1].setting1, 0.0);
  EXPECT_LT(m[1].setting1, kTwoPi);
  EXPECT_EQ(manifest_from_json(manifest_to_json(m[1])), m[1]);
  EXPECT_EQ(m[0].seed + 1, m[1].seed);
}
