#pragma once

#include <numbers>

namespace eprsim {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Slack allowed on the unit-disk membership test.
inline constexpr double kDiskTolerance = 1e-12;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

double norm(Point p);
bool in_unit_disk(Point p);

/// A measurement setting on the unit circle.
///
/// Stored as a base angle in [0, pi) plus a flag telling whether the direction
/// is the reflection of that base through the origin. Reflection toggles the
/// flag, so reflect(reflect(d)) == d holds bit for bit. Any finite angle is
/// accepted and reduced mod 2pi.
class Direction {
 public:
  Direction() = default;

  static Direction from_radians(double angle);

  /// Angle in [0, 2pi), counterclockwise from the positive x-axis. For a
  /// direction built from an angle already in [0, 2pi) this returns that
  /// same double.
  double angle_rad() const;

  /// The upper-half-circle representative, in [0, pi).
  double base_rad() const { return base_; }
  bool upper_half() const { return !reflected_; }

  friend bool operator==(const Direction&, const Direction&) = default;

 private:
  Direction(double base, bool reflected) : base_(base), reflected_(reflected) {}

  double base_ = 0.0;
  bool reflected_ = false;

  friend Direction reflect(Direction d);
};

/// Reduce a finite angle to [0, 2pi).
double canonical_angle(double angle);

/// Reflection through the origin (angle + pi mod 2pi).
Direction reflect(Direction d);

/// Shorter arc between two directions, in [0, pi].
double angular_distance(Direction d1, Direction d2);

/// Applies [[cos a, sin a], [-sin a, cos a]] to p, i.e. rotates p clockwise
/// by alpha.
Point rotate_cw(Point p, double alpha);

}  // namespace eprsim
