#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "eprsim/geometry.hpp"

namespace eprsim {

inline constexpr std::uint64_t kDefaultTrials = 50000;
inline constexpr int kMaxDiskRejections = 1024;

struct PrngStep {
  std::uint64_t state;
  std::uint64_t output;
};

/// SplitMix64 step. All arithmetic is mod 2^64.
constexpr PrngStep prng_next(std::uint64_t state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return {state, z ^ (z >> 31)};
}

/// Top 53 bits of `bits` scaled into [0, 1).
constexpr double uniform01(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

struct DiskSample {
  std::uint64_t state;
  Point point;
};

/// Rejection sampling from [-1,1]^2; both coordinates are redrawn on each
/// rejection. Throws std::runtime_error after kMaxDiskRejections rejections.
DiskSample sample_disk(std::uint64_t state);

struct SourceConfig {
  std::uint64_t seed = 0;
  std::uint64_t n_trials = kDefaultTrials;
};

struct TrialPoint {
  std::uint64_t trial_id;
  Point point;

  friend bool operator==(const TrialPoint&, const TrialPoint&) = default;
};

/// Incremental point source: the generator state is threaded through by value
/// so a stream can be resumed one point at a time.
class PointSource {
 public:
  explicit PointSource(std::uint64_t seed) : state_(seed) {}

  TrialPoint next();

 private:
  std::uint64_t state_;
  std::uint64_t next_id_ = 0;
};

/// Exactly config.n_trials points with ids 0..n-1. Throws
/// std::invalid_argument when n_trials is 0.
std::vector<TrialPoint> stream(const SourceConfig& config);

}  // namespace eprsim
