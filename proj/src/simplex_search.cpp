#include "sslab/simplex_search.hpp"

#include <algorithm>
#include <numeric>

#include "sslab/combinatorics.hpp"
#include "sslab/error.hpp"

namespace sslab {

namespace {

struct Candidate {
  std::vector<double> point;
  double value;
};

Candidate ascend(Candidate start, const SimplexObjective& objective, const SearchConfig& cfg) {
  const std::size_t k = start.point.size();
  double step = cfg.initial_step;
  int moves = 0;
  std::vector<double> trial(k);
  while (step >= cfg.min_step && moves < cfg.max_ascent_moves) {
    double best_gain = cfg.improvement_tol;
    std::vector<double> best_point;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        if (i == j || start.point[j] <= 0.0) continue;
        const double delta = std::min(step, start.point[j]);
        trial = start.point;
        trial[i] += delta;
        trial[j] -= delta;
        const double v = objective(trial);
        if (v - start.value > best_gain) {
          best_gain = v - start.value;
          best_point = trial;
        }
      }
    }
    ++moves;
    if (best_point.empty()) {
      step *= 0.5;
      continue;
    }
    start.point = std::move(best_point);
    start.value += best_gain;
    // Re-evaluate instead of trusting the accumulated sum.
    start.value = objective(start.point);
  }
  return start;
}

}  // namespace

SimplexSearchResult maximize_on_simplex(std::size_t k, const SimplexObjective& objective,
                                        const SearchConfig& cfg) {
  if (k < 1) throw InvalidArgument("simplex dimension must be >= 1");
  if (cfg.grid_divisions < 1 || cfg.restarts < 1) throw InvalidArgument("bad search config");

  std::vector<Candidate> grid;
  grid.reserve(composition_count(cfg.grid_divisions, k));
  const double d = cfg.grid_divisions;
  for_each_composition(cfg.grid_divisions, k, [&](std::span<const int> c) {
    std::vector<double> pt(k);
    for (std::size_t i = 0; i < k; ++i) pt[i] = c[i] / d;
    const double v = objective(pt);
    grid.push_back({std::move(pt), v});
  });

  // Stable so ties keep enumeration order and the run stays deterministic.
  std::stable_sort(grid.begin(), grid.end(),
                   [](const Candidate& a, const Candidate& b) { return a.value > b.value; });
  const std::size_t starts = std::min<std::size_t>(grid.size(), cfg.restarts);

  SimplexSearchResult result{grid.front().point, grid.front().value, {}};
  for (std::size_t s = 0; s < starts; ++s) {
    Candidate refined = ascend(grid[s], objective, cfg);
    if (refined.value > result.value) {
      result.value = refined.value;
      result.argmax = refined.point;
    }
    result.trace.push_back({result.argmax, result.value});
  }
  return result;
}

std::vector<double> project_to_simplex(std::span<const double> v) {
  std::vector<double> u(v.begin(), v.end());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cumulative += u[i];
    const double t = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0.0) theta = t;
  }
  std::vector<double> out(v.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = std::max(v[i] - theta, 0.0);
    sum += out[i];
  }
  for (double& x : out) x /= sum;
  return out;
}

}  // namespace sslab
