#include "sslab/estimators.hpp"

#include <cmath>

#include "sslab/combinatorics.hpp"

namespace sslab {

Pmf mle(const Counts& counts) {
  if (counts.total() == 0) throw EmptySample("MLE is undefined on an empty sample");
  std::vector<double> q(counts.size());
  const double total = counts.total();
  for (std::size_t x = 0; x < q.size(); ++x) q[x] = counts[x] / total;
  return Pmf(std::move(q));
}

Pmf add_constant_l2(const Counts& counts) {
  if (counts.total() == 0) return zero_sample_estimate(counts.size());
  const double n = counts.total();
  const double root = std::sqrt(n);
  const double k = static_cast<double>(counts.size());
  std::vector<double> q(counts.size());
  for (std::size_t x = 0; x < q.size(); ++x) q[x] = (counts[x] + root / k) / (n + root);
  return Pmf(std::move(q));
}

Pmf zero_sample_estimate(std::size_t k) { return Pmf::uniform(k); }

GameTable::GameTable(std::size_t k, int sample_size, std::vector<Pmf> outputs)
    : k_(k), sample_size_(sample_size), outputs_(std::move(outputs)) {
  if (k < 2 || sample_size < 0) throw InvalidArgument("bad game table shape");
  if (outputs_.size() != composition_count(sample_size, k)) {
    throw InvalidArgument("game table must cover all " +
                          std::to_string(composition_count(sample_size, k)) + " outcomes");
  }
  std::size_t i = 0;
  for_each_composition(sample_size, k, [&](std::span<const int> c) {
    if (outputs_[i].size() != k) throw ShapeMismatch("game table entry has wrong alphabet");
    index_.emplace(std::vector<int>(c.begin(), c.end()), i++);
  });
}

const Pmf& GameTable::lookup(const Counts& counts) const {
  if (counts.size() != k_) throw ShapeMismatch("counts alphabet differs from game table");
  const auto it = index_.find(std::vector<int>(counts.values().begin(), counts.values().end()));
  if (it == index_.end()) {
    throw InvalidArgument("game table for n=" + std::to_string(sample_size_) +
                          " has no entry for a sample of size " + std::to_string(counts.total()));
  }
  return outputs_[it->second];
}

std::string to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::mle: return "mle";
    case EstimatorKind::add_constant_l2: return "add-constant";
    case EstimatorKind::uniform: return "uniform";
    case EstimatorKind::fixed: return "fixed";
    case EstimatorKind::game_table: return "game-table";
  }
  return "unknown";
}

UnivariateEstimator UnivariateEstimator::mle(std::size_t k) {
  if (k < 2) throw InvalidArgument("alphabet size must be >= 2");
  return {EstimatorKind::mle, k};
}

UnivariateEstimator UnivariateEstimator::add_constant_l2(std::size_t k) {
  if (k < 2) throw InvalidArgument("alphabet size must be >= 2");
  return {EstimatorKind::add_constant_l2, k};
}

UnivariateEstimator UnivariateEstimator::uniform(std::size_t k) {
  if (k < 2) throw InvalidArgument("alphabet size must be >= 2");
  return {EstimatorKind::uniform, k};
}

UnivariateEstimator UnivariateEstimator::fixed(Pmf output) {
  UnivariateEstimator est(EstimatorKind::fixed, output.size());
  est.fixed_ = std::move(output);
  return est;
}

UnivariateEstimator UnivariateEstimator::game_table(std::vector<GameTable> tables) {
  if (tables.empty()) throw InvalidArgument("game-table estimator needs at least one table");
  const std::size_t k = tables.front().alphabet_size();
  std::map<int, GameTable> by_size;
  for (GameTable& t : tables) {
    if (t.alphabet_size() != k) throw ShapeMismatch("game tables disagree on alphabet size");
    const int n = t.sample_size();
    if (!by_size.emplace(n, std::move(t)).second) {
      throw InvalidArgument("duplicate game table for n=" + std::to_string(n));
    }
  }
  UnivariateEstimator est(EstimatorKind::game_table, k);
  est.tables_ = std::make_shared<const std::map<int, GameTable>>(std::move(by_size));
  return est;
}

bool UnivariateEstimator::covers(int sample_size) const {
  if (kind_ != EstimatorKind::game_table) return sample_size >= 0;
  return tables_->contains(sample_size);
}

Pmf UnivariateEstimator::operator()(const Counts& counts) const {
  if (counts.size() != k_) throw ShapeMismatch("counts alphabet differs from estimator");
  switch (kind_) {
    case EstimatorKind::mle:
      return counts.total() == 0 ? zero_sample_estimate(k_) : sslab::mle(counts);
    case EstimatorKind::add_constant_l2: return sslab::add_constant_l2(counts);
    case EstimatorKind::uniform: return Pmf::uniform(k_);
    case EstimatorKind::fixed: return *fixed_;
    case EstimatorKind::game_table: {
      const auto it = tables_->find(counts.total());
      if (it == tables_->end()) {
        throw InvalidArgument("game-table estimator has no table for n=" +
                              std::to_string(counts.total()));
      }
      return it->second.lookup(counts);
    }
  }
  throw InvalidArgument("unknown estimator kind");
}

ConditionalPmf conditional_composition(const UnivariateEstimator& base,
                                       const JointCounts& labeled) {
  if (base.alphabet_size() != labeled.ky()) {
    throw ShapeMismatch("base estimator alphabet differs from |Y|");
  }
  std::vector<Pmf> rows;
  rows.reserve(labeled.kx());
  for (std::size_t x = 0; x < labeled.kx(); ++x) rows.push_back(base(slice_conditional(labeled, x)));
  return ConditionalPmf(std::move(rows));
}

JointPmf joint_composition(const UnivariateEstimator& base, const Counts& unlabeled,
                           const JointCounts& labeled) {
  if (unlabeled.size() != labeled.kx()) throw ShapeMismatch("unlabeled alphabet differs from |X|");
  if (unlabeled.total() + labeled.total() == 0) {
    throw EmptySample("joint composition needs at least one labeled or unlabeled sample");
  }
  std::vector<int> pooled(labeled.kx());
  for (std::size_t x = 0; x < pooled.size(); ++x) pooled[x] = unlabeled[x] + labeled.row_total(x);
  return JointPmf::product(mle(Counts(std::move(pooled))), conditional_composition(base, labeled));
}

}  // namespace sslab
