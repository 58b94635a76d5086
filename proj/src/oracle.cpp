#include "eprsim/oracle.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace eprsim {

JointStats exact_joint(Direction a, Direction b) {
  const double delta = angular_distance(a, b);
  const double agree = (kPi - delta) / kTwoPi;
  const double disagree = delta / kTwoPi;
  return {agree, disagree, disagree, agree};
}

double exact_corr(Direction a, Direction b) {
  return -1.0 + 4.0 * exact_joint(a, b).p_mm;
}

JointStats grid_joint(Direction a, Direction b, double grid_step,
                      const ResponseRule& rule) {
  if (!(grid_step > 0.0) || grid_step > kMaxGridStep) {
    throw std::invalid_argument("grid_joint: grid_step must be in (0, 0.01]");
  }
  const LocalObservable first = rule.bind(StationId::kStation1, a);
  const LocalObservable second = rule.bind(StationId::kStation2, b);

  const auto cells = static_cast<std::int64_t>(std::ceil(2.0 / grid_step));
  // [++, +-, -+, --]
  std::array<std::uint64_t, 4> tally{};
  for (std::int64_t i = 0; i < cells; ++i) {
    const double x = -1.0 + (static_cast<double>(i) + 0.5) * grid_step;
    const double x2 = x * x;
    if (x2 > 1.0) continue;
    for (std::int64_t j = 0; j < cells; ++j) {
      const double y = -1.0 + (static_cast<double>(j) + 0.5) * grid_step;
      if (x2 + y * y > 1.0) continue;
      const Point p{x, y};
      const int s1 = first(p).value();
      const int s2 = second(p).value();
      ++tally[(s1 < 0 ? 2 : 0) + (s2 < 0 ? 1 : 0)];
    }
  }
  const std::uint64_t total = tally[0] + tally[1] + tally[2] + tally[3];
  if (total == 0) {
    throw std::logic_error("grid_joint: empty lattice");
  }
  const double n = static_cast<double>(total);
  return {tally[0] / n, tally[1] / n, tally[2] / n, tally[3] / n};
}

ConcordanceComparison concordance_comparison(Direction a, Direction b,
                                             Direction c) {
  return {exact_joint(c, b).p_mm - exact_joint(a, b).p_mm,
          exact_joint(c, a).p_mm, exact_joint(a, c).p_mm};
}

}  // namespace eprsim
