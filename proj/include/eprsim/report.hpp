#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "eprsim/experiment.hpp"
#include "eprsim/source.hpp"
#include "eprsim/wire.hpp"

namespace eprsim {

/// Default settings: a = 0, b = 0.3141593,
/// c = 1.989675.
struct BellConfig {
  double a_rad = 0.0;
  double b_rad = 0.3141593;
  double c_rad = 1.989675;
  std::uint64_t n_trials = kDefaultTrials;
  std::uint64_t seed = 1;
  bool share_stream = false;

  Direction a() const { return Direction::from_radians(a_rad); }
  Direction b() const { return Direction::from_radians(b_rad); }
  Direction c() const { return Direction::from_radians(c_rad); }
};

/// Throws std::invalid_argument on non-finite angles or n_trials == 0.
void validate(const BellConfig& config);

/// Violation reported for the default angles by the original three-computer
/// experiment. The semidisk rule gives 0.13333 instead; the report carries
/// both.
inline constexpr double kReferenceClaimedViolation = 0.521;

std::array<wire::RunManifest, 3> run_manifests(const BellConfig& config);

nlohmann::ordered_json config_to_json(const BellConfig& config);
BellConfig config_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json manifest_to_json(const wire::RunManifest& m);
wire::RunManifest manifest_from_json(const nlohmann::ordered_json& j);

/// In-process execution of experiments I, II, III.
ExperimentRuns run_bell_local(const BellConfig& config);

/// Fixed-width reals: 17 significant digits.
std::string format_real(double v);

/// Header `trial,x,y,setting1_rad,setting2_rad,answer1,answer2`.
std::string format_trial_csv(const std::vector<TrialRecord>& records);

nlohmann::ordered_json bell_report_json(const BellConfig& config,
                                        const ExperimentRuns& runs);

struct ReportCheck {
  bool ok = true;
  std::vector<std::string> problems;
};

/// Recomputes every derived number in a report from the numbers it is built
/// from (product sums, counts, correlations) and compares.
ReportCheck verify_report_json(const nlohmann::ordered_json& report);

struct ArtifactPaths {
  std::filesystem::path report;
  std::filesystem::path csv_dir;
};

/// Writes experiment_{I,II,III}.csv under csv_dir and the JSON report.
/// Throws std::runtime_error on I/O failure.
void write_artifacts(const BellConfig& config, const ExperimentRuns& runs,
                     const ArtifactPaths& paths);

}  // namespace eprsim
