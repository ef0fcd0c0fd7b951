#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace sslab {

/// Counter-based generator: output i is a bijective mix of (key, i).
///
/// Each task draws from its own stream `CounterRng(derive_stream_key(seed, id))`,
/// so results do not depend on which thread ran which task.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key) : key_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

std::uint64_t derive_stream_key(std::uint64_t master_seed, std::uint64_t stream_id);

/// Multinomial(n, probs) by sequential conditional binomials.
std::vector<int> sample_multinomial(CounterRng& rng, int n, std::span<const double> probs);

}  // namespace sslab
