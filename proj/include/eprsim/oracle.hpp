#pragma once

#include <cstdint>

#include "eprsim/geometry.hpp"
#include "eprsim/response.hpp"

namespace eprsim {

/// Joint answer probabilities for a pair of settings.
struct JointStats {
  double p_pp = 0.0;
  double p_pm = 0.0;
  double p_mp = 0.0;
  double p_mm = 0.0;

  double sum() const { return p_pp + p_pm + p_mp + p_mm; }
  /// E = P(agree) - P(disagree).
  double correlation() const { return p_pp + p_mm - p_pm - p_mp; }
};

/// Closed form for the semidisk rule. A uniform point has a uniform polar
/// angle, so each answer region is a half-disk and two of them overlap on an
/// arc of length pi - delta.
JointStats exact_joint(Direction a, Direction b);

/// -1 + 4 * P(-,-) = 1 - 2 * delta / pi.
double exact_corr(Direction a, Direction b);

inline constexpr double kMaxGridStep = 0.01;

/// Brute-force lattice tally over cell centres of spacing `grid_step` in
/// [-1,1]^2, keeping the centres inside the disk. Throws
/// std::invalid_argument unless 0 < grid_step <= kMaxGridStep.
JointStats grid_joint(Direction a, Direction b, double grid_step,
                      const ResponseRule& rule = default_rule());

/// Probabilities of (-,-) concordance used when comparing experiments I-III:
/// cb - ab against ca and ac.
struct ConcordanceComparison {
  double cb_minus_ab;
  double ca;
  double ac;
};

ConcordanceComparison concordance_comparison(Direction a, Direction b,
                                             Direction c);

}  // namespace eprsim
