#include "sslab/rng.hpp"

#include <algorithm>
#include <random>

namespace sslab {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_stream_key(std::uint64_t master_seed, std::uint64_t stream_id) {
  return splitmix64(splitmix64(master_seed) ^ (stream_id * 0xd1b54a32d192ed03ULL));
}

CounterRng::result_type CounterRng::operator()() {
  // Two rounds so adjacent counters under nearby keys stay decorrelated.
  return splitmix64(splitmix64(key_ + 0x632be59bd9b4e019ULL * counter_++) ^ key_);
}

double CounterRng::uniform01() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

std::vector<int> sample_multinomial(CounterRng& rng, int n, std::span<const double> probs) {
  std::vector<int> out(probs.size(), 0);
  int remaining = n;
  double mass_left = 1.0;
  for (std::size_t i = 0; i + 1 < probs.size() && remaining > 0; ++i) {
    if (probs[i] <= 0.0) continue;
    const double q = std::clamp(probs[i] / mass_left, 0.0, 1.0);
    if (q >= 1.0) {
      out[i] = remaining;
      remaining = 0;
      break;
    }
    std::binomial_distribution<int> draw(remaining, q);
    out[i] = draw(rng);
    remaining -= out[i];
    mass_left -= probs[i];
    if (mass_left <= 0.0) break;
  }
  if (remaining > 0) {
    // Whatever is left goes to the last symbol with positive mass.
    std::size_t last = probs.size() - 1;
    while (last > 0 && probs[last] <= 0.0) --last;
    out[last] += remaining;
  }
  return out;
}

}  // namespace sslab
