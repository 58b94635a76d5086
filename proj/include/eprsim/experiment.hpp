#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "eprsim/geometry.hpp"
#include "eprsim/response.hpp"
#include "eprsim/source.hpp"

namespace eprsim {

struct TrialRecord {
  std::uint64_t trial_id;
  Point point;
  Direction setting1;
  Direction setting2;
  Sign answer1;
  Sign answer2;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

struct CorrelationEstimate {
  double value = 0.0;
  std::uint64_t n = 0;
  double std_error = 0.0;
  /// Exact sum of the +-1 products; value == product_sum / n.
  std::int64_t product_sum = 0;
};

/// One record per point. Each answer sees only its own setting and the point.
/// Throws std::invalid_argument on an empty stream.
std::vector<TrialRecord> run_experiment(std::span<const TrialPoint> points,
                                        Direction setting1, Direction setting2,
                                        const ResponseRule& rule = default_rule());

/// Mean of answer1 * answer2 with stderr sqrt((1 - value^2) / n).
CorrelationEstimate empirical_corr(std::span<const TrialRecord> records);

/// Experiments I, II, III: station settings (a,b), (c,b), (a,c).
enum class ExperimentTag { kI, kII, kIII };

std::string_view tag_name(ExperimentTag tag);
/// Throws std::invalid_argument for anything but "I", "II", "III".
ExperimentTag tag_from_name(std::string_view name);

struct ExperimentSpec {
  ExperimentTag tag;
  Direction setting1;
  Direction setting2;
  std::uint64_t seed;
};

/// Seeds are seed, seed+1, seed+2 unless share_stream, in which case all
/// three experiments replay the same points.
std::array<ExperimentSpec, 3> plan_experiments(Direction a, Direction b,
                                               Direction c, std::uint64_t seed,
                                               bool share_stream);

enum class BellMode { kExact, kEmpirical };

struct BellReport {
  BellMode mode = BellMode::kExact;
  double e_ab = 0.0;
  double e_cb = 0.0;
  double e_ac = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double violation = 0.0;
  // Empirical mode only.
  std::optional<std::array<CorrelationEstimate, 3>> estimates;
  std::optional<double> combined_stderr;
  /// violation / combined_stderr; absent when the combined stderr is zero.
  std::optional<double> z_score;
};

/// lhs = |e_ab - e_cb|, rhs = 1 + e_ac.
BellReport bell_from_correlations(double e_ab, double e_cb, double e_ac);

BellReport bell_report_exact(Direction a, Direction b, Direction c);

struct ExperimentRuns {
  std::vector<TrialRecord> run_i;
  std::vector<TrialRecord> run_ii;
  std::vector<TrialRecord> run_iii;
};

/// Throws std::invalid_argument when the three runs differ in length.
BellReport bell_report_empirical(const ExperimentRuns& runs);

struct PointwiseBell {
  double lhs;
  double rhs;
  bool holds;
};

/// |S1_a S2_b - S1_c S2_b| <= 1 - S1_a S1_c evaluated at a single point.
PointwiseBell pointwise_bell_identity(Point p, Direction a, Direction b,
                                      Direction c);

/// Fraction of trials of a shared-stream run on which the pointwise identity
/// holds, using each experiment's recorded answers. Throws
/// std::invalid_argument when the runs do not replay the same points.
double pointwise_identity_fraction(const ExperimentRuns& runs);

/// Fraction of trials violating the substituted per-trial bound
/// |prod_I - prod_II| <= 1 + prod_III, where prod_X = answer1 * answer2 of
/// experiment X on the same point. Same stream requirement as above.
double chameleon_substitution_audit(const ExperimentRuns& runs);

struct SingletAudit {
  bool pass;
  std::uint64_t checked;
  std::uint64_t failures;
};

/// Runs n trials with settings (setting1, setting2) and passes iff every
/// product is -1.
SingletAudit singlet_audit(std::uint64_t n, std::uint64_t seed,
                           Direction setting1, Direction setting2);
/// The singlet configuration (c, reflect(c)).
SingletAudit singlet_audit(std::uint64_t n, std::uint64_t seed, Direction c);

}  // namespace eprsim
