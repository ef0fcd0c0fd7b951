#pragma once
//
// Fictitious play between nature (finitely supported priors over Δ_k) and
// the statistician (Bayes responses), bracketing the univariate minimax risk
// r^p_n for any p >= 2.
//
// Any prior's Bayes risk is a lower bound on r^p_n and any estimator's
// worst-case risk is an upper bound, so the returned bracket stays valid
// whether or not the play has converged.
//

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "sslab/asymptotics.hpp"
#include "sslab/core.hpp"
#include "sslab/estimators.hpp"
#include "sslab/risk.hpp"
#include "sslab/simplex_search.hpp"

namespace sslab {

inline constexpr double kAtomMergeDistance = 1e-6;

struct Atom {
  double weight;
  Pmf pmf;
};

class NatureStrategy {
 public:
  NatureStrategy() = default;
  explicit NatureStrategy(Pmf single_atom);

  /// Adds `weight` at `pmf`, merging into an existing atom within
  /// kAtomMergeDistance in l-infinity.
  void add(const Pmf& pmf, double weight);

  /// Atoms with weights normalized to sum 1.
  std::vector<Atom> atoms() const;
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }
  std::size_t alphabet_size() const;

 private:
  std::vector<Atom> atoms_;  // unnormalized
  double total_weight_ = 0.0;
};

struct GameBracket {
  double lower = 0.0;
  double upper = 2.0;
  int iterations = 0;
  bool converged = false;

  double width() const { return upper - lower; }
  double midpoint() const { return 0.5 * (lower + upper); }
};

struct BayesOptions {
  int max_steps = 10000;
  double tolerance = 1e-10;  ///< stop when one step decreases the objective by less
  std::uint64_t cap = kDefaultEnumerationCap;
};

struct BayesResponse {
  UnivariateEstimator estimator;
  /// Bayes risk of `estimator` under the prior.
  double bayes_risk;
  /// Outcomes every atom gives probability zero; they map to uniform.
  std::size_t zero_posterior_outcomes;
};

/// For each outcome c, argmin_q sum_j w_j Mult(c; n, p_j) ||p_j - q||^p_p.
/// Exact posterior mean for p = 2, projected gradient descent otherwise.
/// `warm_start` (same n and k) seeds the descent.
BayesResponse bayes_response(const NatureStrategy& prior, int n, const LossExponent& loss,
                             const BayesOptions& options = {},
                             const UnivariateEstimator* warm_start = nullptr);

/// Nature's best reply: the worst-case p for `est`.
WorstCaseResult nature_best_response(const UnivariateEstimator& est, int n,
                                     const LossExponent& loss, const SearchConfig& config = {},
                                     std::uint64_t cap = kDefaultEnumerationCap);

/// A search config whose grid is as fine as `budget` grid points allow
/// (never coarser than the default 1/8).
SearchConfig game_search_config(std::size_t k, std::size_t budget = 4000);

struct FictitiousPlayConfig {
  int max_iters = 500;
  double tolerance = 1e-9;           ///< absolute bracket width target
  double relative_tolerance = 1e-3;  ///< width target relative to the upper end
  BayesOptions bayes;
  std::optional<SearchConfig> search;  ///< defaults to game_search_config(k)
};

struct BracketStep {
  double lower;
  double upper;
};

struct GameResult {
  GameBracket bracket;
  /// Estimator attaining bracket.upper.
  UnivariateEstimator estimator;
  NatureStrategy prior;
  /// Running best (lower, upper) after each iteration.
  std::vector<BracketStep> history;
};

GameResult fictitious_play(std::size_t k, int n, const LossExponent& loss,
                           const FictitiousPlayConfig& config = {});

/// Games for every sample size 0..max_n: an r-table of bracket midpoints
/// (with widths) and the game-table estimator family covering all sizes.
struct SolvedFamily {
  std::vector<GameBracket> brackets;
  RTable rtable;
  UnivariateEstimator estimator;
};

SolvedFamily solve_family(std::size_t k, int max_n, const LossExponent& loss,
                          const FictitiousPlayConfig& config = {});

}  // namespace sslab
