#include "eprsim/response.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace eprsim {

Sign Sign::from_int(int v) {
  if (v == 1) return plus();
  if (v == -1) return minus();
  throw std::invalid_argument("sign must be -1 or 1, got " + std::to_string(v));
}

StationId station_from_int(int id) {
  if (id == 1) return StationId::kStation1;
  if (id == 2) return StationId::kStation2;
  throw std::invalid_argument("station id must be 1 or 2, got " +
                              std::to_string(id));
}

HiddenFunction::HiddenFunction(Direction a)
    : cos_(std::cos(a.base_rad())),
      sin_(std::sin(a.base_rad())),
      negate_(!a.upper_half()) {}

Sign HiddenFunction::operator()(Point p) const {
  const double ry = -p.x * sin_ + p.y * cos_;
  bool plus;
  if (ry > 0.0) {
    plus = true;
  } else if (ry < 0.0) {
    plus = false;
  } else if (p.x == 0.0 && p.y == 0.0) {
    plus = true;
  } else {
    plus = p.x * cos_ + p.y * sin_ > 0.0;
  }
  if (negate_) plus = !plus;
  return plus ? Sign::plus() : Sign::minus();
}

Sign hidden_s(Direction a, Point p) {
  if (!in_unit_disk(p)) {
    throw std::invalid_argument("hidden_s: point outside the unit disk");
  }
  return HiddenFunction(a)(p);
}

LocalObservable SemidiskRule::bind(StationId /*station*/,
                                   Direction setting) const {
  return HiddenFunction(setting);
}

const ResponseRule& default_rule() {
  static const SemidiskRule rule;
  return rule;
}

Sign station_response(StationId /*station*/, Direction setting, Point p) {
  return hidden_s(setting, p);
}

Sign chameleon_flip(Direction measured, Direction other, Sign raw) {
  return other == measured ? raw : -raw;
}

}  // namespace eprsim
