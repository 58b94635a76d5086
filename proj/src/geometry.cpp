#include "eprsim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eprsim {

double norm(Point p) { return std::hypot(p.x, p.y); }

bool in_unit_disk(Point p) {
  return std::isfinite(p.x) && std::isfinite(p.y) &&
         p.x * p.x + p.y * p.y <= 1.0 + kDiskTolerance;
}

double canonical_angle(double angle) {
  if (!std::isfinite(angle)) {
    throw std::invalid_argument("direction angle must be finite");
  }
  if (angle >= 0.0 && angle < kTwoPi) {
    return angle;
  }
  double r = std::fmod(angle, kTwoPi);
  if (r < 0.0) {
    r += kTwoPi;
  }
  // fmod of a tiny negative value can round up to exactly 2pi.
  if (r >= kTwoPi) {
    r = 0.0;
  }
  return r;
}

Direction Direction::from_radians(double angle) {
  const double a = canonical_angle(angle);
  if (a < kPi) {
    return Direction(a, false);
  }
  // Exact for a in [pi, 2pi) (Sterbenz), so angle_rad() recovers a.
  return Direction(a - kPi, true);
}

double Direction::angle_rad() const {
  if (!reflected_) {
    return base_;
  }
  const double a = base_ + kPi;
  return a < kTwoPi ? a : std::nextafter(kTwoPi, 0.0);
}

Direction reflect(Direction d) { return Direction(d.base_, !d.reflected_); }

double angular_distance(Direction d1, Direction d2) {
  const double diff = std::abs(d1.angle_rad() - d2.angle_rad());
  return std::min(diff, kTwoPi - diff);
}

Point rotate_cw(Point p, double alpha) {
  if (!std::isfinite(alpha) || !std::isfinite(p.x) || !std::isfinite(p.y)) {
    throw std::invalid_argument("rotate_cw: non-finite input");
  }
  const double c = std::cos(alpha);
  const double s = std::sin(alpha);
  return {p.x * c + p.y * s, -p.x * s + p.y * c};
}

}  // namespace eprsim
