#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace sslab {

/// Number of count vectors of length k summing to n, C(n+k-1, k-1).
/// Saturates at UINT64_MAX.
std::uint64_t composition_count(int n, std::size_t k);

/// Visits every count vector of length k with total n, in colex order:
/// (n,0,..,0), (n-1,1,0,..), ..., (0,..,0,n).
template <class Fn>
void for_each_composition(int n, std::size_t k, Fn&& fn) {
  std::vector<int> c(k, 0);
  c[0] = n;
  while (true) {
    fn(std::span<const int>(c));
    std::size_t i = 0;
    while (i < k && c[i] == 0) ++i;
    if (i + 1 >= k) return;
    const int v = c[i];
    c[i] = 0;
    c[0] = v - 1;
    c[i + 1] += 1;
  }
}

/// All compositions materialized in for_each_composition order.
std::vector<std::vector<int>> all_compositions(int n, std::size_t k);

double log_factorial(int n);
double log_binomial(int n, int i);

/// log(n! / prod c_i!).
double log_multinomial_coefficient(std::span<const int> counts);

/// Multinomial(counts; total, probs). Zero when a positive count meets a
/// zero probability.
double multinomial_probability(std::span<const int> counts, std::span<const double> probs);

/// Same, with the log coefficient supplied by the caller.
double multinomial_probability(double log_coefficient, std::span<const int> counts,
                               std::span<const double> probs);

/// Pairwise (cascade) sum, so the result does not depend on how callers
/// partition the terms.
double pairwise_sum(std::span<const double> terms);

}  // namespace sslab
