#pragma once
//
// Binomial-weighted sums H^n_p and G^n_p, the Bernstein operator, binomial
// tail bounds, rate-constant extraction and the closed-form risk bounds.
//

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "sslab/core.hpp"

namespace sslab {

/// Per-sample-size minimax risks r_0..r_N for a fixed alphabet and exponent.
/// `widths` are bracket widths (zero for exact tables).
class RTable {
 public:
  RTable(std::vector<double> values, std::vector<double> widths);
  explicit RTable(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  int max_n() const { return static_cast<int>(values_.size()) - 1; }
  std::span<const double> values() const { return values_; }
  std::span<const double> widths() const { return widths_; }
  double operator[](std::size_t i) const { return values_[i]; }

  /// First n+1 entries.
  RTable prefix(int n) const;

 private:
  std::vector<double> values_;
  std::vector<double> widths_;
};

/// r^2_i = (1 - 1/k) / (sqrt(i) + 1)^2, exact for the l^2_2 problem.
RTable exact_l2_rtable(int max_n, std::size_t k);

/// sum_i C(n,i) r_i x^(i+p) (1-x)^(n-i). Requires r.size() == n+1.
double h_np(double x, int n, const LossExponent& loss, std::span<const double> r);

/// sum_i C(n,i) r_i x^i (i/n)^p (1-x)^(n-i). Requires n >= 1, r.size() == n+1.
double g_np(double x, int n, const LossExponent& loss, std::span<const double> r);

/// B_n(f, x) = sum_i C(n,i) f(i/n) x^i (1-x)^(n-i).
double bernstein(const std::function<double(double)>& f, int n, double x);

struct TailBounds {
  double lower_tail;  ///< bound on P(X <= E - lambda)
  double upper_tail;  ///< bound on P(X >= E + lambda)
};

/// Chernoff-type bounds for a sum of independent Bernoullis with mean E.
TailBounds binomial_tail_bounds(double expected, double lambda);

struct RatePoint {
  int n;
  double lower;
  double upper;
};

struct ScaledPoint {
  int n;
  double lower;  ///< n^(p/2) * lower
  double upper;  ///< n^(p/2) * upper
};

struct RateConstant {
  std::vector<ScaledPoint> scaled;
  double c_sup;
  double c_inf;
  int window_start;  ///< first n of the tail window

  double midpoint() const { return 0.5 * (c_sup + c_inf); }
};

/// Scales each bracket by n^(p/2) and reports sup/inf over the tail window,
/// the last ceil(N/2) points. Needs at least 4 points with n >= 1.
RateConstant rate_constants(std::span<const RatePoint> brackets, const LossExponent& loss);

/// (2n)^(-p/2) * p * k * Gamma(p/2): the MLE risk upper bound.
double mle_risk_upper(int n, std::size_t k, const LossExponent& loss);

/// gamma^p_{m,n}, the excess of R^p_{m,n} over R^p_m, from R^p_m and r^p_{m+n}.
double gamma_mn_bound(double r_m, double r_mn, const LossExponent& loss, std::size_t ky);

}  // namespace sslab
