#pragma once
//
// Simplex points, count vectors, the l^p_p loss and seeded dataset sampling.
//
// Symbols are dense indices 0..k-1. Datasets are carried as sufficient
// statistics (count vectors); every estimator and risk in this library is a
// function of counts only.
//

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sslab/error.hpp"

namespace sslab {

inline constexpr double kSimplexTolerance = 1e-9;

/// A point of the probability simplex over k >= 2 symbols.
///
/// Construction renormalizes inputs whose sum is within kSimplexTolerance of
/// one and rejects anything else (negative entries, NaN, wrong sum).
class Pmf {
 public:
  explicit Pmf(std::vector<double> probs);

  static Pmf uniform(std::size_t k);
  static Pmf point_mass(std::size_t k, std::size_t at);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const { return probs_; }

  friend bool operator==(const Pmf&, const Pmf&) = default;

 private:
  std::vector<double> probs_;
};

/// p_{Y|X}: one Pmf over Y per symbol of X.
class ConditionalPmf {
 public:
  explicit ConditionalPmf(std::vector<Pmf> rows);

  std::size_t kx() const { return rows_.size(); }
  std::size_t ky() const { return rows_.front().size(); }
  const Pmf& row(std::size_t x) const { return rows_.at(x); }
  std::span<const Pmf> rows() const { return rows_; }

 private:
  std::vector<Pmf> rows_;
};

/// Joint mass over X x Y, stored row-major (x major).
class JointPmf {
 public:
  JointPmf(std::size_t kx, std::size_t ky, std::vector<double> probs);

  /// p_X(x) * p_{Y|X}(y|x).
  static JointPmf product(const Pmf& marginal, const ConditionalPmf& conditional);
  static JointPmf uniform(std::size_t kx, std::size_t ky);

  std::size_t kx() const { return kx_; }
  std::size_t ky() const { return ky_; }
  double operator()(std::size_t x, std::size_t y) const { return probs_[x * ky_ + y]; }
  std::span<const double> probs() const { return probs_; }

  Pmf marginal_x() const;
  /// Rows with zero marginal mass are returned as uniform.
  ConditionalPmf conditional() const;
  /// The same mass viewed as a single Pmf over kx*ky cells.
  Pmf flattened() const { return Pmf(probs_); }

  friend bool operator==(const JointPmf&, const JointPmf&) = default;

 private:
  std::size_t kx_;
  std::size_t ky_;
  std::vector<double> probs_;
};

class Counts {
 public:
  explicit Counts(std::vector<int> counts);
  static Counts zeros(std::size_t k) { return Counts(std::vector<int>(k, 0)); }

  std::size_t size() const { return counts_.size(); }
  int operator[](std::size_t i) const { return counts_[i]; }
  int total() const { return total_; }
  std::span<const int> values() const { return counts_; }

  friend bool operator==(const Counts&, const Counts&) = default;

 private:
  std::vector<int> counts_;
  int total_ = 0;
};

/// Labeled data l^m as a kx x ky count matrix (row-major).
class JointCounts {
 public:
  JointCounts(std::size_t kx, std::size_t ky, std::vector<int> counts);
  static JointCounts zeros(std::size_t kx, std::size_t ky) {
    return JointCounts(kx, ky, std::vector<int>(kx * ky, 0));
  }

  std::size_t kx() const { return kx_; }
  std::size_t ky() const { return ky_; }
  int operator()(std::size_t x, std::size_t y) const { return counts_[x * ky_ + y]; }
  int total() const { return total_; }
  /// n_x = T_x(l^m_X).
  int row_total(std::size_t x) const { return row_totals_.at(x); }
  std::span<const int> values() const { return counts_; }

  /// Counts of the X coordinate, l^m_X.
  Counts marginal_x() const { return Counts(row_totals_); }

  friend bool operator==(const JointCounts&, const JointCounts&) = default;

 private:
  std::size_t kx_;
  std::size_t ky_;
  std::vector<int> counts_;
  std::vector<int> row_totals_;
  int total_ = 0;
};

/// Exponent p >= 2 of the l^p_p loss.
class LossExponent {
 public:
  explicit LossExponent(double p);

  double p() const { return p_; }
  int floor_p() const { return floor_p_; }
  /// Falling factorial p(p-1)...(p-i+1); falling(0) = 1. Defined for i <= floor_p.
  double falling(int i) const;

 private:
  double p_;
  int floor_p_;
};

/// Sum_i |a_i - b_i|^p over raw coordinates. Throws ShapeMismatch.
double lp_distance_pow(std::span<const double> a, std::span<const double> b, double p);

double lp_loss(const Pmf& a, const Pmf& b, const LossExponent& loss);
double lp_loss(const JointPmf& a, const JointPmf& b, const LossExponent& loss);

Counts counts_from_samples(std::span<const std::size_t> samples, std::size_t k);

/// Row x of the labeled counts: the slice s_{Y|X=x}, whose total is n_x.
Counts slice_conditional(const JointCounts& labeled, std::size_t x);

struct Datasets {
  JointCounts labeled;
  Counts unlabeled;
};

/// m labeled draws from p_xy and n unlabeled draws from its X marginal.
/// Deterministic in `seed`.
Datasets sample_datasets(const JointPmf& p_xy, int m, int n, std::uint64_t seed);

}  // namespace sslab
