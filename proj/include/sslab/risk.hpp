#pragma once
//
// Exact (enumeration), Monte-Carlo and worst-case risk of named estimators
// for the univariate problem r^p_n and the semi-supervised problems
// R^p_{m,n}, R^p_m and R̄^p_m.
//

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sslab/core.hpp"
#include "sslab/estimators.hpp"
#include "sslab/simplex_search.hpp"

namespace sslab {

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

enum class RiskMethod { exact, monte_carlo, bracket };

std::string to_string(RiskMethod method);

struct RiskMeta {
  double p = 2.0;
  int n = 0;
  int m = 0;
  std::size_t kx = 0;
  std::size_t ky = 0;
};

/// A risk value with its provenance. `lower`/`upper` are the value itself for
/// exact results, value -/+ the 95% half-width for Monte-Carlo ones, and the
/// bracket ends for brackets.
struct RiskEstimate {
  double value = 0.0;
  RiskMethod method = RiskMethod::exact;
  double half_width = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  RiskMeta meta;

  static RiskEstimate exact(double value, RiskMeta meta);
  static RiskEstimate monte_carlo(double mean, double half_width, RiskMeta meta);
  static RiskEstimate bracket(double lower, double upper, RiskMeta meta);
};

struct WorstCaseResult {
  RiskEstimate risk;
  std::variant<Pmf, JointPmf> argmax;
  std::vector<SearchTracePoint> trace;
};

/// Risk of one univariate estimator at sample size n, with all estimator
/// outputs precomputed so that many p_true can be evaluated cheaply.
class UnivariateRiskEvaluator {
 public:
  UnivariateRiskEvaluator(const UnivariateEstimator& est, int n, const LossExponent& loss,
                          std::uint64_t cap = kDefaultEnumerationCap);

  double operator()(std::span<const double> p_true) const;

  std::size_t alphabet_size() const { return k_; }
  std::size_t outcome_count() const { return log_coefficients_.size(); }

 private:
  std::size_t k_;
  int n_;
  double p_;
  std::vector<int> outcomes_;          // outcome-major, k per outcome
  std::vector<double> log_coefficients_;
  std::vector<double> estimates_;      // outcome-major, k per outcome
};

/// Risk of the joint composition at (m labeled, n unlabeled) samples.
class JointRiskEvaluator {
 public:
  JointRiskEvaluator(const UnivariateEstimator& base, std::size_t kx, int m, int n,
                     const LossExponent& loss, std::uint64_t cap = kDefaultEnumerationCap);

  /// p_xy flattened row-major over kx * ky cells.
  double operator()(std::span<const double> p_xy) const;

 private:
  std::size_t kx_;
  std::size_t ky_;
  int m_;
  int n_;
  double p_;
  std::vector<int> labeled_;           // outcome-major, kx*ky per outcome
  std::vector<double> labeled_log_coefficients_;
  std::vector<double> rows_;           // conditional composition, kx*ky per outcome
  std::vector<int> unlabeled_;         // outcome-major, kx per outcome
  std::vector<double> unlabeled_log_coefficients_;
};

/// E ||p_XY - p_X q̂_{Y|X}(L^m)||^p_p: the conditional composition when the
/// marginal is known exactly (the n -> infinity limit).
class KnownMarginalRiskEvaluator {
 public:
  KnownMarginalRiskEvaluator(const UnivariateEstimator& base, std::size_t kx, int m,
                             const LossExponent& loss, std::uint64_t cap = kDefaultEnumerationCap);

  double operator()(std::span<const double> p_xy) const;

 private:
  std::size_t kx_;
  std::size_t ky_;
  double p_;
  std::vector<int> labeled_;
  std::vector<double> log_coefficients_;
  std::vector<double> rows_;
};

RiskEstimate exact_risk_univariate(const UnivariateEstimator& est, const Pmf& p_true, int n,
                                   const LossExponent& loss,
                                   std::uint64_t cap = kDefaultEnumerationCap);

RiskEstimate exact_risk_joint(const UnivariateEstimator& base, const JointPmf& p_xy, int m, int n,
                              const LossExponent& loss,
                              std::uint64_t cap = kDefaultEnumerationCap);

RiskEstimate exact_risk_known_marginal(const UnivariateEstimator& base, const JointPmf& p_xy,
                                       int m, const LossExponent& loss,
                                       std::uint64_t cap = kDefaultEnumerationCap);

/// Sample mean over `draws` seeded datasets; half-width 1.96 * stderr.
RiskEstimate mc_risk_univariate(const UnivariateEstimator& est, const Pmf& p_true, int n,
                                const LossExponent& loss, int draws, std::uint64_t seed);

RiskEstimate mc_risk_joint(const UnivariateEstimator& base, const JointPmf& p_xy, int m, int n,
                           const LossExponent& loss, int draws, std::uint64_t seed);

/// max over p in Δ_k of the exact risk of `est` at sample size n.
WorstCaseResult worst_case_risk(const UnivariateEstimator& est, int n, const LossExponent& loss,
                                const SearchConfig& config = {},
                                std::uint64_t cap = kDefaultEnumerationCap);

/// max over p_XY of the exact joint-composition risk.
WorstCaseResult worst_case_risk_joint(const UnivariateEstimator& base, std::size_t kx, int m,
                                      int n, const LossExponent& loss,
                                      const SearchConfig& config = {},
                                      std::uint64_t cap = kDefaultEnumerationCap);

/// max over p_XY of the known-marginal conditional-composition risk.
WorstCaseResult worst_case_risk_known_marginal(const UnivariateEstimator& base, std::size_t kx,
                                               int m, const LossExponent& loss,
                                               const SearchConfig& config = {},
                                               std::uint64_t cap = kDefaultEnumerationCap);

/// sum_x sum_i C(m,i) p_x^(i+p) (1-p_x)^(m-i) r_i, with m = r_table.size() - 1.
double rbar_objective(const Pmf& p_x, std::span<const double> r_table, const LossExponent& loss);

/// Maximizes rbar_objective over Δ_{kx}.
WorstCaseResult rbar_maximize(std::size_t kx, const LossExponent& loss,
                              std::span<const double> r_table, const SearchConfig& config = {});

/// [r_m, kx * r_m] for R^p_m, from the univariate risk at sample size m.
RiskEstimate rmp_bracket(const RiskEstimate& r_m, std::size_t kx);

}  // namespace sslab
