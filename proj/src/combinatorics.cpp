#include "sslab/combinatorics.hpp"

#include <cmath>
#include <limits>

#include "sslab/error.hpp"

namespace sslab {

std::uint64_t composition_count(int n, std::size_t k) {
  if (n < 0 || k == 0) return 0;
  // C(n + k - 1, k - 1) by the multiplicative formula; each partial product
  // is itself a binomial coefficient so the division is exact.
  const std::uint64_t r = k - 1;
  std::uint64_t result = 1;
  for (std::uint64_t j = 1; j <= r; ++j) {
    const std::uint64_t factor = static_cast<std::uint64_t>(n) + j;
    if (result > std::numeric_limits<std::uint64_t>::max() / factor) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    result = result * factor / j;
  }
  return result;
}

std::vector<std::vector<int>> all_compositions(int n, std::size_t k) {
  std::vector<std::vector<int>> out;
  out.reserve(composition_count(n, k));
  for_each_composition(n, k, [&](std::span<const int> c) { out.emplace_back(c.begin(), c.end()); });
  return out;
}

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

double log_binomial(int n, int i) {
  if (i < 0 || i > n) return -std::numeric_limits<double>::infinity();
  return log_factorial(n) - log_factorial(i) - log_factorial(n - i);
}

double log_multinomial_coefficient(std::span<const int> counts) {
  int total = 0;
  double s = 0.0;
  for (int c : counts) {
    total += c;
    s -= log_factorial(c);
  }
  return s + log_factorial(total);
}

double multinomial_probability(double log_coefficient, std::span<const int> counts,
                               std::span<const double> probs) {
  if (counts.size() != probs.size()) throw ShapeMismatch("counts and probabilities differ in size");
  double lp = log_coefficient;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0) continue;
    if (probs[i] <= 0.0) return 0.0;
    lp += counts[i] * std::log(probs[i]);
  }
  return std::exp(lp);
}

double multinomial_probability(std::span<const int> counts, std::span<const double> probs) {
  return multinomial_probability(log_multinomial_coefficient(counts), counts, probs);
}

double pairwise_sum(std::span<const double> terms) {
  if (terms.size() <= 8) {
    double s = 0.0;
    for (double t : terms) s += t;
    return s;
  }
  const std::size_t half = terms.size() / 2;
  return pairwise_sum(terms.first(half)) + pairwise_sum(terms.subspan(half));
}

}  // namespace sslab
