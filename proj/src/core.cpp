#include "sslab/core.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "sslab/rng.hpp"

namespace sslab {

namespace {

std::vector<double> validated_simplex(std::vector<double> probs, std::size_t min_size) {
  if (probs.size() < min_size) {
    throw InvalidArgument("simplex point needs at least " + std::to_string(min_size) +
                          " coordinates, got " + std::to_string(probs.size()));
  }
  double sum = 0.0;
  for (double v : probs) {
    if (!std::isfinite(v) || v < 0.0) {
      throw InvalidArgument("simplex coordinate must be finite and nonnegative, got " +
                            std::to_string(v));
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kSimplexTolerance) {
    throw InvalidArgument("simplex coordinates sum to " + std::to_string(sum));
  }
  if (sum != 1.0) {
    for (double& v : probs) v /= sum;
  }
  return probs;
}

}  // namespace

Pmf::Pmf(std::vector<double> probs) : probs_(validated_simplex(std::move(probs), 2)) {}

Pmf Pmf::uniform(std::size_t k) {
  if (k < 2) throw InvalidArgument("alphabet size must be >= 2");
  return Pmf(std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

Pmf Pmf::point_mass(std::size_t k, std::size_t at) {
  if (at >= k) throw InvalidArgument("point mass outside alphabet");
  std::vector<double> probs(k, 0.0);
  probs[at] = 1.0;
  return Pmf(std::move(probs));
}

ConditionalPmf::ConditionalPmf(std::vector<Pmf> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw InvalidArgument("conditional pmf needs at least one row");
  for (const Pmf& r : rows_) {
    if (r.size() != rows_.front().size()) {
      throw ShapeMismatch("conditional pmf rows have different alphabet sizes");
    }
  }
}

JointPmf::JointPmf(std::size_t kx, std::size_t ky, std::vector<double> probs)
    : kx_(kx), ky_(ky) {
  if (kx == 0 || ky == 0 || probs.size() != kx * ky) {
    throw ShapeMismatch("joint pmf shape does not match its data");
  }
  probs_ = validated_simplex(std::move(probs), 1);
}

JointPmf JointPmf::product(const Pmf& marginal, const ConditionalPmf& conditional) {
  if (marginal.size() != conditional.kx()) {
    throw ShapeMismatch("marginal and conditional disagree on |X|");
  }
  const std::size_t kx = conditional.kx();
  const std::size_t ky = conditional.ky();
  std::vector<double> probs(kx * ky);
  for (std::size_t x = 0; x < kx; ++x) {
    for (std::size_t y = 0; y < ky; ++y) {
      probs[x * ky + y] = marginal[x] * conditional.row(x)[y];
    }
  }
  return JointPmf(kx, ky, std::move(probs));
}

JointPmf JointPmf::uniform(std::size_t kx, std::size_t ky) {
  const double v = 1.0 / static_cast<double>(kx * ky);
  return JointPmf(kx, ky, std::vector<double>(kx * ky, v));
}

Pmf JointPmf::marginal_x() const {
  std::vector<double> m(kx_, 0.0);
  for (std::size_t x = 0; x < kx_; ++x) {
    for (std::size_t y = 0; y < ky_; ++y) m[x] += (*this)(x, y);
  }
  return Pmf(std::move(m));
}

ConditionalPmf JointPmf::conditional() const {
  std::vector<Pmf> rows;
  rows.reserve(kx_);
  for (std::size_t x = 0; x < kx_; ++x) {
    double mass = 0.0;
    for (std::size_t y = 0; y < ky_; ++y) mass += (*this)(x, y);
    if (mass <= 0.0) {
      rows.push_back(Pmf::uniform(ky_));
      continue;
    }
    std::vector<double> row(ky_);
    for (std::size_t y = 0; y < ky_; ++y) row[y] = (*this)(x, y) / mass;
    rows.emplace_back(std::move(row));
  }
  return ConditionalPmf(std::move(rows));
}

Counts::Counts(std::vector<int> counts) : counts_(std::move(counts)) {
  for (int c : counts_) {
    if (c < 0) throw InvalidArgument("counts must be nonnegative");
    total_ += c;
  }
}

JointCounts::JointCounts(std::size_t kx, std::size_t ky, std::vector<int> counts)
    : kx_(kx), ky_(ky), counts_(std::move(counts)), row_totals_(kx, 0) {
  if (kx == 0 || ky == 0 || counts_.size() != kx * ky) {
    throw ShapeMismatch("joint counts shape does not match its data");
  }
  for (std::size_t x = 0; x < kx; ++x) {
    for (std::size_t y = 0; y < ky; ++y) {
      const int c = counts_[x * ky + y];
      if (c < 0) throw InvalidArgument("counts must be nonnegative");
      row_totals_[x] += c;
    }
    total_ += row_totals_[x];
  }
}

LossExponent::LossExponent(double p) : p_(p) {
  if (!std::isfinite(p) || p < 2.0) {
    throw InvalidArgument("loss exponent must satisfy p >= 2, got " + std::to_string(p));
  }
  floor_p_ = static_cast<int>(std::floor(p));
}

double LossExponent::falling(int i) const {
  if (i < 0 || i > floor_p_) throw InvalidArgument("falling factorial index out of range");
  double f = 1.0;
  for (int j = 0; j < i; ++j) f *= p_ - j;
  return f;
}

double lp_distance_pow(std::span<const double> a, std::span<const double> b, double p) {
  if (a.size() != b.size()) throw ShapeMismatch("loss arguments have different shapes");
  double s = 0.0;
  if (p == 2.0) {
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
  }
  for (std::size_t i = 0; i < a.size(); ++i) s += std::pow(std::abs(a[i] - b[i]), p);
  return s;
}

double lp_loss(const Pmf& a, const Pmf& b, const LossExponent& loss) {
  return lp_distance_pow(a.probs(), b.probs(), loss.p());
}

double lp_loss(const JointPmf& a, const JointPmf& b, const LossExponent& loss) {
  if (a.kx() != b.kx() || a.ky() != b.ky()) {
    throw ShapeMismatch("joint pmfs have different shapes");
  }
  return lp_distance_pow(a.probs(), b.probs(), loss.p());
}

Counts counts_from_samples(std::span<const std::size_t> samples, std::size_t k) {
  std::vector<int> counts(k, 0);
  for (std::size_t s : samples) {
    if (s >= k) {
      throw InvalidArgument("symbol " + std::to_string(s) + " outside alphabet of size " +
                            std::to_string(k));
    }
    ++counts[s];
  }
  return Counts(std::move(counts));
}

Counts slice_conditional(const JointCounts& labeled, std::size_t x) {
  if (x >= labeled.kx()) {
    throw InvalidArgument("symbol " + std::to_string(x) + " outside X alphabet");
  }
  const auto row = labeled.values().subspan(x * labeled.ky(), labeled.ky());
  return Counts(std::vector<int>(row.begin(), row.end()));
}

Datasets sample_datasets(const JointPmf& p_xy, int m, int n, std::uint64_t seed) {
  if (m < 0 || n < 0) throw InvalidArgument("sample sizes must be nonnegative");
  CounterRng labeled_rng(derive_stream_key(seed, 0));
  CounterRng unlabeled_rng(derive_stream_key(seed, 1));
  auto labeled = sample_multinomial(labeled_rng, m, p_xy.probs());
  std::vector<double> marginal(p_xy.kx(), 0.0);
  for (std::size_t x = 0; x < p_xy.kx(); ++x) {
    for (std::size_t y = 0; y < p_xy.ky(); ++y) marginal[x] += p_xy(x, y);
  }
  auto unlabeled = sample_multinomial(unlabeled_rng, n, marginal);
  return {JointCounts(p_xy.kx(), p_xy.ky(), std::move(labeled)), Counts(std::move(unlabeled))};
}

}  // namespace sslab
