#include "sslab/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sslab/combinatorics.hpp"

namespace sslab {

namespace {

// Terms below this are dropped; they cannot move 1e-12-level comparisons.
constexpr double kLogNegligible = -690.0;  // ~ log(1e-300)

double log_or_neg_inf(double v) {
  return v > 0.0 ? std::log(v) : -std::numeric_limits<double>::infinity();
}

// sum_i C(n,i) x^i (1-x)^(n-i) * w(i), with w(i) >= 0 supplied in log space.
template <class LogWeight>
double binomial_weighted_sum(int n, double x, LogWeight&& log_weight) {
  if (x < 0.0 || x > 1.0) throw InvalidArgument("x must lie in [0, 1]");
  const double lx = log_or_neg_inf(x);
  const double l1x = log_or_neg_inf(1.0 - x);
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    const double a = i == 0 ? 0.0 : i * lx;
    const double b = i == n ? 0.0 : (n - i) * l1x;
    const double lt = log_binomial(n, i) + a + b + log_weight(i);
    if (lt > kLogNegligible) terms.push_back(std::exp(lt));
  }
  return pairwise_sum(terms);
}

void check_table(int n, std::span<const double> r) {
  if (n < 0 || r.size() != static_cast<std::size_t>(n) + 1) {
    throw InvalidArgument("r-table has " + std::to_string(r.size()) + " entries, expected " +
                          std::to_string(n + 1));
  }
}

}  // namespace

RTable::RTable(std::vector<double> values, std::vector<double> widths)
    : values_(std::move(values)), widths_(std::move(widths)) {
  if (values_.empty()) throw InvalidArgument("r-table must not be empty");
  if (widths_.size() != values_.size()) throw ShapeMismatch("r-table widths differ in length");
  for (double v : values_) {
    if (!(v >= 0.0 && v <= 2.0)) throw InvalidArgument("r-table entries must lie in [0, 2]");
  }
}

RTable::RTable(std::vector<double> values)
    : RTable(values, std::vector<double>(values.size(), 0.0)) {}

RTable RTable::prefix(int n) const {
  if (n < 0 || n > max_n()) throw InvalidArgument("r-table prefix out of range");
  return RTable(std::vector<double>(values_.begin(), values_.begin() + n + 1),
                std::vector<double>(widths_.begin(), widths_.begin() + n + 1));
}

RTable exact_l2_rtable(int max_n, std::size_t k) {
  if (max_n < 0 || k < 2) throw InvalidArgument("bad r-table request");
  std::vector<double> r(static_cast<std::size_t>(max_n) + 1);
  const double lead = 1.0 - 1.0 / static_cast<double>(k);
  for (int i = 0; i <= max_n; ++i) {
    const double d = std::sqrt(static_cast<double>(i)) + 1.0;
    r[static_cast<std::size_t>(i)] = lead / (d * d);
  }
  return RTable(std::move(r));
}

double h_np(double x, int n, const LossExponent& loss, std::span<const double> r) {
  check_table(n, r);
  if (x == 0.0) return 0.0;
  const double p_log_x = loss.p() * std::log(x);
  return binomial_weighted_sum(n, x, [&](int i) { return log_or_neg_inf(r[i]) + p_log_x; });
}

double g_np(double x, int n, const LossExponent& loss, std::span<const double> r) {
  if (n < 1) throw InvalidArgument("G^n_p needs n >= 1");
  check_table(n, r);
  const double ln = std::log(static_cast<double>(n));
  return binomial_weighted_sum(n, x, [&](int i) {
    if (i == 0) return -std::numeric_limits<double>::infinity();
    return log_or_neg_inf(r[i]) + loss.p() * (std::log(static_cast<double>(i)) - ln);
  });
}

double bernstein(const std::function<double(double)>& f, int n, double x) {
  if (n < 1) throw InvalidArgument("Bernstein operator needs n >= 1");
  if (x < 0.0 || x > 1.0) throw InvalidArgument("x must lie in [0, 1]");
  if (x == 0.0) return f(0.0);
  if (x == 1.0) return f(1.0);
  // f may change sign, so weights are exponentiated and multiplied directly.
  const double lx = std::log(x);
  const double l1x = std::log1p(-x);
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    const double lw = log_binomial(n, i) + i * lx + (n - i) * l1x;
    if (lw > kLogNegligible) terms.push_back(std::exp(lw) * f(static_cast<double>(i) / n));
  }
  return pairwise_sum(terms);
}

TailBounds binomial_tail_bounds(double expected, double lambda) {
  if (!(expected >= 0.0) || !(lambda >= 0.0)) {
    throw InvalidArgument("tail bounds need E >= 0 and lambda >= 0");
  }
  if (expected == 0.0) {
    const double v = lambda == 0.0 ? 1.0 : 0.0;
    return {v, v};
  }
  const double l2 = lambda * lambda;
  return {std::exp(-l2 / (2.0 * expected)), std::exp(-l2 / (2.0 * (expected + lambda / 3.0)))};
}

RateConstant rate_constants(std::span<const RatePoint> brackets, const LossExponent& loss) {
  if (brackets.size() < 4) {
    throw InvalidArgument("rate extraction needs at least 4 points, got " +
                          std::to_string(brackets.size()));
  }
  RateConstant out{};
  out.scaled.reserve(brackets.size());
  for (const RatePoint& b : brackets) {
    if (b.n < 1) throw InvalidArgument("rate extraction needs n >= 1");
    if (!(b.lower > 0.0) || b.upper < b.lower) {
      throw InvalidArgument("rate extraction needs 0 < lower <= upper");
    }
    const double scale = std::pow(static_cast<double>(b.n), loss.p() / 2.0);
    out.scaled.push_back({b.n, scale * b.lower, scale * b.upper});
  }
  const std::size_t tail = (out.scaled.size() + 1) / 2;
  const std::size_t start = out.scaled.size() - tail;
  out.window_start = out.scaled[start].n;
  out.c_sup = -std::numeric_limits<double>::infinity();
  out.c_inf = std::numeric_limits<double>::infinity();
  for (std::size_t i = start; i < out.scaled.size(); ++i) {
    out.c_sup = std::max(out.c_sup, out.scaled[i].upper);
    out.c_inf = std::min(out.c_inf, out.scaled[i].lower);
  }
  return out;
}

double mle_risk_upper(int n, std::size_t k, const LossExponent& loss) {
  if (n < 1) throw InvalidArgument("MLE risk bound needs n >= 1");
  const double p = loss.p();
  return std::pow(2.0 * n, -p / 2.0) * p * static_cast<double>(k) * std::tgamma(p / 2.0);
}

double gamma_mn_bound(double r_m, double r_mn, const LossExponent& loss, std::size_t ky) {
  if (!(r_m >= 0.0) || !(r_mn >= 0.0)) throw InvalidArgument("risks must be nonnegative");
  const double p = loss.p();
  const int fp = loss.floor_p();
  const double kyd = static_cast<double>(ky);
  double factorial = 1.0;
  double gamma = 0.0;
  for (int i = 1; i <= fp - 1; ++i) {
    factorial *= i;
    const double c_i = loss.falling(i) * std::pow(kyd, i / p) / factorial;
    gamma += c_i * std::pow(r_m, (p - i) / p) * std::pow(r_mn, i / p);
  }
  factorial *= fp;
  const double c_prime = loss.falling(fp) * std::pow(kyd, fp / p) / factorial;
  // Not pinned down by the derivation; it absorbs the 2^(p-1) split of the
  // l^p triangle inequality.
  const double c_second = std::pow(2.0, p - 1.0) * c_prime;
  const double frac = (p - fp) / p;
  const double r_pow = std::pow(r_mn, fp / p);
  gamma += c_prime * std::pow(r_m, frac) * r_pow;
  gamma += c_second * std::pow(r_m + r_mn, frac) * r_pow;
  return gamma;
}

}  // namespace sslab
