#pragma once

#include <cstdint>
#include <random>

#include "eprsim/geometry.hpp"

namespace eprsim::test_support {

// Test-side randomness, independent of the library's SplitMix source.
class Random {
 public:
  explicit Random(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }

  Direction direction() { return Direction::from_radians(uniform(0.0, kTwoPi)); }

  Point disk_point() {
    for (;;) {
      const Point p{uniform(-1.0, 1.0), uniform(-1.0, 1.0)};
      if (p.x * p.x + p.y * p.y <= 1.0) return p;
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace eprsim::test_support
