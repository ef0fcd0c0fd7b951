#include "sslab/risk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "sslab/asymptotics.hpp"
#include "sslab/combinatorics.hpp"
#include "sslab/rng.hpp"

namespace sslab {

namespace {

constexpr double kLogNegligible = -690.0;

std::uint64_t checked_outcomes(std::uint64_t a, std::uint64_t b, std::uint64_t cap) {
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t total = (a != 0 && b > max / a) ? max : a * b;
  if (total > cap) throw CapExceeded(total, cap);
  return total;
}

std::vector<double> logs_of(std::span<const double> probs) {
  std::vector<double> out(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    out[i] = probs[i] > 0.0 ? std::log(probs[i]) : -std::numeric_limits<double>::infinity();
  }
  return out;
}

// log Multinomial(c; p); -inf when a positive count hits zero mass.
double log_probability(double log_coefficient, const int* counts, std::span<const double> log_p) {
  double lp = log_coefficient;
  for (std::size_t i = 0; i < log_p.size(); ++i) {
    if (counts[i] == 0) continue;
    lp += counts[i] * log_p[i];
  }
  return lp;
}

void enumerate_into(int n, std::size_t k, std::vector<int>& outcomes,
                    std::vector<double>& log_coefficients) {
  for_each_composition(n, k, [&](std::span<const int> c) {
    outcomes.insert(outcomes.end(), c.begin(), c.end());
    log_coefficients.push_back(log_multinomial_coefficient(c));
  });
}

// Conditional composition rows for each labeled outcome, flattened.
std::vector<double> composition_rows(const UnivariateEstimator& base, std::size_t kx,
                                     std::size_t ky, const std::vector<int>& labeled) {
  const std::size_t cells = kx * ky;
  const std::size_t count = labeled.size() / cells;
  std::vector<double> rows;
  rows.reserve(labeled.size());
  for (std::size_t o = 0; o < count; ++o) {
    const int* c = labeled.data() + o * cells;
    for (std::size_t x = 0; x < kx; ++x) {
      const Pmf row = base(Counts(std::vector<int>(c + x * ky, c + (x + 1) * ky)));
      rows.insert(rows.end(), row.probs().begin(), row.probs().end());
    }
  }
  return rows;
}

double abs_pow(double d, double p) {
  return p == 2.0 ? d * d : std::pow(std::abs(d), p);
}

void check_pmf_span(std::span<const double> p, std::size_t expected) {
  if (p.size() != expected) throw ShapeMismatch("distribution has the wrong number of cells");
}

struct BlockStats {
  double sum = 0.0;
  double sum_sq = 0.0;
};

// Runs `draw(rng)` `draws` times in fixed blocks with per-block streams, so the
// result does not depend on the thread count.
template <class Draw>
RiskEstimate monte_carlo(int draws, std::uint64_t seed, RiskMeta meta, Draw&& draw) {
  if (draws < 100) throw InvalidArgument("Monte-Carlo risk needs at least 100 draws");
  constexpr int kBlock = 1024;
  const int blocks = (draws + kBlock - 1) / kBlock;
  std::vector<BlockStats> stats(static_cast<std::size_t>(blocks));
  auto run_block = [&](int b) {
    CounterRng rng(derive_stream_key(seed, static_cast<std::uint64_t>(b)));
    const int begin = b * kBlock;
    const int end = std::min(draws, begin + kBlock);
    BlockStats s;
    for (int d = begin; d < end; ++d) {
      const double v = draw(rng);
      s.sum += v;
      s.sum_sq += v * v;
    }
    stats[static_cast<std::size_t>(b)] = s;
  };
  const int threads =
      std::clamp(static_cast<int>(std::thread::hardware_concurrency()), 1, std::max(1, blocks));
  if (threads == 1) {
    for (int b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (int b = t; b < blocks; b += threads) run_block(b);
      });
    }
  }
  std::vector<double> sums(stats.size()), sums_sq(stats.size());
  for (std::size_t b = 0; b < stats.size(); ++b) {
    sums[b] = stats[b].sum;
    sums_sq[b] = stats[b].sum_sq;
  }
  const double nd = draws;
  const double mean = pairwise_sum(sums) / nd;
  const double var = std::max(0.0, (pairwise_sum(sums_sq) - nd * mean * mean) / (nd - 1.0));
  return RiskEstimate::monte_carlo(mean, 1.96 * std::sqrt(var / nd), meta);
}

}  // namespace

std::string to_string(RiskMethod method) {
  switch (method) {
    case RiskMethod::exact: return "exact";
    case RiskMethod::monte_carlo: return "monte-carlo";
    case RiskMethod::bracket: return "bracket";
  }
  return "unknown";
}

RiskEstimate RiskEstimate::exact(double value, RiskMeta meta) {
  return {value, RiskMethod::exact, 0.0, value, value, meta};
}

RiskEstimate RiskEstimate::monte_carlo(double mean, double half_width, RiskMeta meta) {
  return {mean, RiskMethod::monte_carlo, half_width, std::max(0.0, mean - half_width),
          mean + half_width, meta};
}

RiskEstimate RiskEstimate::bracket(double lower, double upper, RiskMeta meta) {
  if (lower > upper) throw InvalidArgument("bracket lower end exceeds upper end");
  return {0.5 * (lower + upper), RiskMethod::bracket, 0.5 * (upper - lower), lower, upper, meta};
}

UnivariateRiskEvaluator::UnivariateRiskEvaluator(const UnivariateEstimator& est, int n,
                                                 const LossExponent& loss, std::uint64_t cap)
    : k_(est.alphabet_size()), n_(n), p_(loss.p()) {
  if (n < 0) throw InvalidArgument("sample size must be nonnegative");
  checked_outcomes(composition_count(n, k_), 1, cap);
  enumerate_into(n, k_, outcomes_, log_coefficients_);
  estimates_.reserve(outcomes_.size());
  for (std::size_t o = 0; o < log_coefficients_.size(); ++o) {
    const int* c = outcomes_.data() + o * k_;
    const Pmf q = est(Counts(std::vector<int>(c, c + k_)));
    estimates_.insert(estimates_.end(), q.probs().begin(), q.probs().end());
  }
}

double UnivariateRiskEvaluator::operator()(std::span<const double> p_true) const {
  check_pmf_span(p_true, k_);
  const auto log_p = logs_of(p_true);
  std::vector<double> terms;
  terms.reserve(log_coefficients_.size());
  for (std::size_t o = 0; o < log_coefficients_.size(); ++o) {
    const double lp = log_probability(log_coefficients_[o], outcomes_.data() + o * k_, log_p);
    if (lp <= kLogNegligible) continue;
    const double* q = estimates_.data() + o * k_;
    double loss = 0.0;
    for (std::size_t x = 0; x < k_; ++x) loss += abs_pow(p_true[x] - q[x], p_);
    terms.push_back(std::exp(lp) * loss);
  }
  return pairwise_sum(terms);
}

JointRiskEvaluator::JointRiskEvaluator(const UnivariateEstimator& base, std::size_t kx, int m,
                                       int n, const LossExponent& loss, std::uint64_t cap)
    : kx_(kx), ky_(base.alphabet_size()), m_(m), n_(n), p_(loss.p()) {
  if (kx < 1) throw InvalidArgument("|X| must be >= 1");
  if (m < 0 || n < 0) throw InvalidArgument("sample sizes must be nonnegative");
  if (m + n == 0) throw EmptySample("joint composition needs at least one sample");
  for (int i = 0; i <= m; ++i) {
    if (!base.covers(i)) {
      throw InvalidArgument("base estimator does not cover slice size " + std::to_string(i));
    }
  }
  checked_outcomes(composition_count(m, kx * ky_), composition_count(n, kx), cap);
  enumerate_into(m, kx * ky_, labeled_, labeled_log_coefficients_);
  enumerate_into(n, kx, unlabeled_, unlabeled_log_coefficients_);
  rows_ = composition_rows(base, kx, ky_, labeled_);
}

double JointRiskEvaluator::operator()(std::span<const double> p_xy) const {
  const std::size_t cells = kx_ * ky_;
  check_pmf_span(p_xy, cells);
  const auto log_pxy = logs_of(p_xy);
  std::vector<double> marginal(kx_, 0.0);
  for (std::size_t x = 0; x < kx_; ++x) {
    for (std::size_t y = 0; y < ky_; ++y) marginal[x] += p_xy[x * ky_ + y];
  }
  const auto log_px = logs_of(marginal);

  // Unlabeled outcome probabilities do not depend on the labeled outcome.
  std::vector<double> unlabeled_prob(unlabeled_log_coefficients_.size(), 0.0);
  for (std::size_t u = 0; u < unlabeled_prob.size(); ++u) {
    const double lp =
        log_probability(unlabeled_log_coefficients_[u], unlabeled_.data() + u * kx_, log_px);
    unlabeled_prob[u] = lp > kLogNegligible ? std::exp(lp) : 0.0;
  }

  const double pooled_total = m_ + n_;
  std::vector<double> terms;
  std::vector<double> inner;
  std::vector<int> row_totals(kx_);
  for (std::size_t l = 0; l < labeled_log_coefficients_.size(); ++l) {
    const int* lc = labeled_.data() + l * cells;
    const double lp = log_probability(labeled_log_coefficients_[l], lc, log_pxy);
    if (lp <= kLogNegligible) continue;
    for (std::size_t x = 0; x < kx_; ++x) {
      row_totals[x] = 0;
      for (std::size_t y = 0; y < ky_; ++y) row_totals[x] += lc[x * ky_ + y];
    }
    const double* rows = rows_.data() + l * cells;
    inner.clear();
    for (std::size_t u = 0; u < unlabeled_prob.size(); ++u) {
      if (unlabeled_prob[u] == 0.0) continue;
      const int* uc = unlabeled_.data() + u * kx_;
      double loss = 0.0;
      for (std::size_t x = 0; x < kx_; ++x) {
        const double qx = (uc[x] + row_totals[x]) / pooled_total;
        for (std::size_t y = 0; y < ky_; ++y) {
          loss += abs_pow(p_xy[x * ky_ + y] - qx * rows[x * ky_ + y], p_);
        }
      }
      inner.push_back(unlabeled_prob[u] * loss);
    }
    terms.push_back(std::exp(lp) * pairwise_sum(inner));
  }
  return pairwise_sum(terms);
}

KnownMarginalRiskEvaluator::KnownMarginalRiskEvaluator(const UnivariateEstimator& base,
                                                       std::size_t kx, int m,
                                                       const LossExponent& loss,
                                                       std::uint64_t cap)
    : kx_(kx), ky_(base.alphabet_size()), p_(loss.p()) {
  if (kx < 1) throw InvalidArgument("|X| must be >= 1");
  if (m < 0) throw InvalidArgument("sample size must be nonnegative");
  for (int i = 0; i <= m; ++i) {
    if (!base.covers(i)) {
      throw InvalidArgument("base estimator does not cover slice size " + std::to_string(i));
    }
  }
  checked_outcomes(composition_count(m, kx * ky_), 1, cap);
  enumerate_into(m, kx * ky_, labeled_, log_coefficients_);
  rows_ = composition_rows(base, kx, ky_, labeled_);
}

double KnownMarginalRiskEvaluator::operator()(std::span<const double> p_xy) const {
  const std::size_t cells = kx_ * ky_;
  check_pmf_span(p_xy, cells);
  const auto log_pxy = logs_of(p_xy);
  std::vector<double> marginal(kx_, 0.0);
  for (std::size_t x = 0; x < kx_; ++x) {
    for (std::size_t y = 0; y < ky_; ++y) marginal[x] += p_xy[x * ky_ + y];
  }
  std::vector<double> terms;
  for (std::size_t l = 0; l < log_coefficients_.size(); ++l) {
    const double lp = log_probability(log_coefficients_[l], labeled_.data() + l * cells, log_pxy);
    if (lp <= kLogNegligible) continue;
    const double* rows = rows_.data() + l * cells;
    double loss = 0.0;
    for (std::size_t x = 0; x < kx_; ++x) {
      for (std::size_t y = 0; y < ky_; ++y) {
        loss += abs_pow(p_xy[x * ky_ + y] - marginal[x] * rows[x * ky_ + y], p_);
      }
    }
    terms.push_back(std::exp(lp) * loss);
  }
  return pairwise_sum(terms);
}

RiskEstimate exact_risk_univariate(const UnivariateEstimator& est, const Pmf& p_true, int n,
                                   const LossExponent& loss, std::uint64_t cap) {
  if (p_true.size() != est.alphabet_size()) throw ShapeMismatch("p_true alphabet differs");
  const UnivariateRiskEvaluator eval(est, n, loss, cap);
  return RiskEstimate::exact(eval(p_true.probs()), {loss.p(), n, 0, p_true.size(), 0});
}

RiskEstimate exact_risk_joint(const UnivariateEstimator& base, const JointPmf& p_xy, int m, int n,
                              const LossExponent& loss, std::uint64_t cap) {
  if (p_xy.ky() != base.alphabet_size()) throw ShapeMismatch("p_xy |Y| differs from base");
  const JointRiskEvaluator eval(base, p_xy.kx(), m, n, loss, cap);
  return RiskEstimate::exact(eval(p_xy.probs()), {loss.p(), n, m, p_xy.kx(), p_xy.ky()});
}

RiskEstimate exact_risk_known_marginal(const UnivariateEstimator& base, const JointPmf& p_xy,
                                       int m, const LossExponent& loss, std::uint64_t cap) {
  if (p_xy.ky() != base.alphabet_size()) throw ShapeMismatch("p_xy |Y| differs from base");
  const KnownMarginalRiskEvaluator eval(base, p_xy.kx(), m, loss, cap);
  return RiskEstimate::exact(eval(p_xy.probs()), {loss.p(), 0, m, p_xy.kx(), p_xy.ky()});
}

RiskEstimate mc_risk_univariate(const UnivariateEstimator& est, const Pmf& p_true, int n,
                                const LossExponent& loss, int draws, std::uint64_t seed) {
  if (p_true.size() != est.alphabet_size()) throw ShapeMismatch("p_true alphabet differs");
  if (n < 0) throw InvalidArgument("sample size must be nonnegative");
  const RiskMeta meta{loss.p(), n, 0, p_true.size(), 0};
  return monte_carlo(draws, seed, meta, [&](CounterRng& rng) {
    const Counts c(sample_multinomial(rng, n, p_true.probs()));
    return lp_loss(p_true, est(c), loss);
  });
}

RiskEstimate mc_risk_joint(const UnivariateEstimator& base, const JointPmf& p_xy, int m, int n,
                           const LossExponent& loss, int draws, std::uint64_t seed) {
  if (p_xy.ky() != base.alphabet_size()) throw ShapeMismatch("p_xy |Y| differs from base");
  if (m < 0 || n < 0) throw InvalidArgument("sample sizes must be nonnegative");
  if (m + n == 0) throw EmptySample("joint composition needs at least one sample");
  const RiskMeta meta{loss.p(), n, m, p_xy.kx(), p_xy.ky()};
  const Pmf marginal = p_xy.marginal_x();
  return monte_carlo(draws, seed, meta, [&](CounterRng& rng) {
    const JointCounts l(p_xy.kx(), p_xy.ky(), sample_multinomial(rng, m, p_xy.probs()));
    const Counts u(sample_multinomial(rng, n, marginal.probs()));
    return lp_loss(p_xy, joint_composition(base, u, l), loss);
  });
}

WorstCaseResult worst_case_risk(const UnivariateEstimator& est, int n, const LossExponent& loss,
                                const SearchConfig& config, std::uint64_t cap) {
  const UnivariateRiskEvaluator eval(est, n, loss, cap);
  const std::size_t k = est.alphabet_size();
  auto found = maximize_on_simplex(k, [&](std::span<const double> p) { return eval(p); }, config);
  const RiskMeta meta{loss.p(), n, 0, k, 0};
  return {RiskEstimate::exact(found.value, meta), Pmf(std::move(found.argmax)),
          std::move(found.trace)};
}

namespace {

WorstCaseResult joint_search(const std::function<double(std::span<const double>)>& eval,
                             std::size_t kx, std::size_t ky, RiskMeta meta,
                             const SearchConfig& config) {
  auto found = maximize_on_simplex(kx * ky, eval, config);
  return {RiskEstimate::exact(found.value, meta), JointPmf(kx, ky, std::move(found.argmax)),
          std::move(found.trace)};
}

}  // namespace

WorstCaseResult worst_case_risk_joint(const UnivariateEstimator& base, std::size_t kx, int m,
                                      int n, const LossExponent& loss,
                                      const SearchConfig& config, std::uint64_t cap) {
  const JointRiskEvaluator eval(base, kx, m, n, loss, cap);
  const std::size_t ky = base.alphabet_size();
  return joint_search([&](std::span<const double> p) { return eval(p); }, kx, ky,
                      {loss.p(), n, m, kx, ky}, config);
}

WorstCaseResult worst_case_risk_known_marginal(const UnivariateEstimator& base, std::size_t kx,
                                               int m, const LossExponent& loss,
                                               const SearchConfig& config, std::uint64_t cap) {
  const KnownMarginalRiskEvaluator eval(base, kx, m, loss, cap);
  const std::size_t ky = base.alphabet_size();
  return joint_search([&](std::span<const double> p) { return eval(p); }, kx, ky,
                      {loss.p(), 0, m, kx, ky}, config);
}

double rbar_objective(const Pmf& p_x, std::span<const double> r_table, const LossExponent& loss) {
  if (r_table.empty()) throw InvalidArgument("r-table must have m+1 entries");
  for (double r : r_table) {
    if (!(r >= 0.0 && r <= 2.0)) throw InvalidArgument("r-table entries must lie in [0, 2]");
  }
  const int m = static_cast<int>(r_table.size()) - 1;
  double total = 0.0;
  for (double x : p_x.probs()) total += h_np(x, m, loss, r_table);
  return total;
}

WorstCaseResult rbar_maximize(std::size_t kx, const LossExponent& loss,
                              std::span<const double> r_table, const SearchConfig& config) {
  if (kx < 2) throw InvalidArgument("|X| must be >= 2");
  const int m = static_cast<int>(r_table.size()) - 1;
  // Validates the table once before the search.
  rbar_objective(Pmf::uniform(kx), r_table, loss);
  auto found = maximize_on_simplex(
      kx,
      [&](std::span<const double> p) {
        double total = 0.0;
        for (double x : p) total += h_np(x, m, loss, r_table);
        return total;
      },
      config);
  const RiskMeta meta{loss.p(), 0, m, kx, 0};
  return {RiskEstimate::exact(found.value, meta), Pmf(std::move(found.argmax)),
          std::move(found.trace)};
}

RiskEstimate rmp_bracket(const RiskEstimate& r_m, std::size_t kx) {
  if (kx < 1) throw InvalidArgument("|X| must be >= 1");
  RiskMeta meta = r_m.meta;
  meta.ky = r_m.meta.kx;
  meta.kx = kx;
  meta.m = r_m.meta.n;
  return RiskEstimate::bracket(r_m.lower, static_cast<double>(kx) * r_m.upper, meta);
}

}  // namespace sslab
