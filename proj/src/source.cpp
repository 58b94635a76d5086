#include "eprsim/source.hpp"

#include <stdexcept>

namespace eprsim {

DiskSample sample_disk(std::uint64_t state) {
  for (int attempt = 0; attempt <= kMaxDiskRejections; ++attempt) {
    const PrngStep u = prng_next(state);
    const PrngStep v = prng_next(u.state);
    state = v.state;
    const double x = 2.0 * uniform01(u.output) - 1.0;
    const double y = 2.0 * uniform01(v.output) - 1.0;
    if (x * x + y * y <= 1.0) {
      return {state, {x, y}};
    }
  }
  throw std::runtime_error("sample_disk: rejection cap exceeded, generator is broken");
}

TrialPoint PointSource::next() {
  const DiskSample s = sample_disk(state_);
  state_ = s.state;
  return {next_id_++, s.point};
}

std::vector<TrialPoint> stream(const SourceConfig& config) {
  if (config.n_trials == 0) {
    throw std::invalid_argument("n_trials must be at least 1");
  }
  PointSource source(config.seed);
  std::vector<TrialPoint> out;
  out.reserve(config.n_trials);
  for (std::uint64_t i = 0; i < config.n_trials; ++i) {
    out.push_back(source.next());
  }
  return out;
}

}  // namespace eprsim
