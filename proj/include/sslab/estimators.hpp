#pragma once
//
// Univariate pmf estimators and the conditional / joint compositions built
// from them.
//

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sslab/core.hpp"

namespace sslab {

/// T_x / total. Throws EmptySample when total = 0.
Pmf mle(const Counts& counts);

/// (T_x + sqrt(n)/k) / (n + sqrt(n)); uniform when n = 0.
Pmf add_constant_l2(const Counts& counts);

/// Estimate used on an empty sample: uniform over k symbols.
Pmf zero_sample_estimate(std::size_t k);

/// Estimator outputs for every outcome at one sample size, indexed by the
/// outcome's position in for_each_composition order.
class GameTable {
 public:
  GameTable(std::size_t k, int sample_size, std::vector<Pmf> outputs);

  std::size_t alphabet_size() const { return k_; }
  int sample_size() const { return sample_size_; }
  std::span<const Pmf> outputs() const { return outputs_; }

  const Pmf& lookup(const Counts& counts) const;

 private:
  std::size_t k_;
  int sample_size_;
  std::vector<Pmf> outputs_;
  std::map<std::vector<int>, std::size_t> index_;
};

enum class EstimatorKind { mle, add_constant_l2, uniform, fixed, game_table };

std::string to_string(EstimatorKind kind);

/// A family of univariate estimators indexed by sample size.
///
/// Every kind is defined at total 0: mle and add_constant_l2 fall back to
/// zero_sample_estimate there. A game_table family only covers the sample
/// sizes it was built with.
class UnivariateEstimator {
 public:
  static UnivariateEstimator mle(std::size_t k);
  static UnivariateEstimator add_constant_l2(std::size_t k);
  static UnivariateEstimator uniform(std::size_t k);
  /// Ignores the data and always returns `output`.
  static UnivariateEstimator fixed(Pmf output);
  static UnivariateEstimator game_table(std::vector<GameTable> tables);

  EstimatorKind kind() const { return kind_; }
  std::size_t alphabet_size() const { return k_; }
  bool covers(int sample_size) const;
  /// Game tables by sample size; empty for other kinds.
  const std::map<int, GameTable>& tables() const { return *tables_; }

  Pmf operator()(const Counts& counts) const;

 private:
  UnivariateEstimator(EstimatorKind kind, std::size_t k) : kind_(kind), k_(k) {}

  EstimatorKind kind_;
  std::size_t k_;
  std::optional<Pmf> fixed_;
  std::shared_ptr<const std::map<int, GameTable>> tables_ =
      std::make_shared<const std::map<int, GameTable>>();
};

/// Row x is base applied to the slice s_{Y|X=x} at its own size n_x.
ConditionalPmf conditional_composition(const UnivariateEstimator& base,
                                       const JointCounts& labeled);

/// p̂_X(u ∪ l_X) times the conditional composition, row by row.
/// Throws EmptySample when both datasets are empty.
JointPmf joint_composition(const UnivariateEstimator& base, const Counts& unlabeled,
                           const JointCounts& labeled);

}  // namespace sslab
