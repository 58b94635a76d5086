#pragma once

#include <cstdint>
#include <functional>
#include <memory>

#include "eprsim/geometry.hpp"

namespace eprsim {

/// A +1/-1 answer. No other value is constructible.
class Sign {
 public:
  static constexpr Sign plus() { return Sign(1); }
  static constexpr Sign minus() { return Sign(-1); }

  /// Throws std::invalid_argument unless v is -1 or +1.
  static Sign from_int(int v);

  constexpr int value() const { return value_; }

  constexpr Sign operator-() const { return Sign(-value_); }
  friend constexpr Sign operator*(Sign a, Sign b) {
    return Sign(a.value_ * b.value_);
  }
  friend constexpr bool operator==(Sign, Sign) = default;

 private:
  constexpr explicit Sign(int v) : value_(static_cast<std::int8_t>(v)) {}
  std::int8_t value_;
};

enum class StationId { kStation1 = 1, kStation2 = 2 };

/// Throws std::invalid_argument unless id is 1 or 2.
StationId station_from_int(int id);
inline int to_int(StationId s) { return static_cast<int>(s); }

/// The hidden function S_a with the trigonometry for `a` evaluated once.
///
/// For an upper-half a at angle alpha the point is rotated by
/// rotate_cw(p, alpha) and the answer is the sign of the rotated y. Ties on
/// the dividing line go to the sign of the rotated x (+1 if x > 0), and the
/// origin is +1. A lower-half direction answers the negation of its
/// reflection.
class HiddenFunction {
 public:
  explicit HiddenFunction(Direction a);

  /// No disk check; callers must pass a point of the closed unit disk.
  Sign operator()(Point p) const;

 private:
  double cos_;
  double sin_;
  bool negate_;
};

/// Throws std::invalid_argument for points outside the closed unit disk.
Sign hidden_s(Direction a, Point p);

/// A station answer as a function of the shared point only.
using LocalObservable = std::function<Sign(Point)>;

/// Maps a station and its own setting to that station's observable. The
/// signature has no slot for the other station's setting.
class ResponseRule {
 public:
  virtual ~ResponseRule() = default;
  virtual LocalObservable bind(StationId station, Direction setting) const = 0;
};

/// Both stations evaluate the same hidden function of their own setting.
class SemidiskRule final : public ResponseRule {
 public:
  LocalObservable bind(StationId station, Direction setting) const override;
};

const ResponseRule& default_rule();

Sign station_response(StationId station, Direction setting, Point p);

/// Measuring `measured` flips every other observable of the same particle.
Sign chameleon_flip(Direction measured, Direction other, Sign raw);

}  // namespace eprsim
