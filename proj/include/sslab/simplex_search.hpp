#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace sslab {

/// Multi-start maximization over the probability simplex.
struct SearchConfig {
  int grid_divisions = 8;         ///< coarse grid step 1/grid_divisions per coordinate
  int restarts = 16;              ///< best grid points refined by ascent
  double initial_step = 0.1;      ///< first ascent step, halved on stalls
  double min_step = 1e-9;         ///< ascent stops once the step falls below this
  double improvement_tol = 1e-12; ///< moves gaining less than this count as stalls
  int max_ascent_moves = 100000;
};

struct SearchTracePoint {
  std::vector<double> iterate;
  double objective;
};

struct SimplexSearchResult {
  std::vector<double> argmax;
  double value;
  /// Best point found so far after each restart; objective is nondecreasing.
  std::vector<SearchTracePoint> trace;
};

using SimplexObjective = std::function<double(std::span<const double>)>;

/// Evaluates the objective on the grid {c / d : sum c = d}, then refines the
/// `restarts` best grid points by pairwise mass-transfer ascent (move `step`
/// of mass from coordinate j to i, clipped to stay on the simplex).
/// Deterministic given the config.
SimplexSearchResult maximize_on_simplex(std::size_t k, const SimplexObjective& objective,
                                        const SearchConfig& config = {});

/// Euclidean projection onto the probability simplex.
std::vector<double> project_to_simplex(std::span<const double> v);

}  // namespace sslab
