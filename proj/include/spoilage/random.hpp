#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>

namespace spoilage {

/// Seedable random stream with a platform-independent output sequence.
///
/// The engine is std::mt19937_64, whose output is fixed by the standard. All
/// derived draws are computed here rather than through <random>
/// distributions, which are implementation-defined:
///   uniform()        53 high bits of one engine word, scaled to [0, 1).
///   uniform_index(n) rejection sampling on engine words (unbiased).
///   normal()         Marsaglia polar method; each accepted pair yields two
///                    variates, the second is returned by the next call.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  double uniform();
  std::size_t uniform_index(std::size_t n);
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

/// SplitMix64 mix of (seed, stream); used to give independent sub-streams
/// (network init, exploration, replay sampling, per-agent seeds) one root seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace spoilage
