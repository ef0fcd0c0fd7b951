#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace sslab::lab {

/// Everything a command needs; echoed verbatim into its report so a run can
/// be repeated from the report alone.
struct ExperimentConfig {
  std::string command;
  std::size_t kx = 2;
  std::size_t ky = 2;
  double p = 2.0;
  int m = 2;
  int n = 4;
  std::vector<int> n_values;         // sweep range
  std::vector<double> xs;            // sweep x grid (h-ratio)
  std::vector<double> distribution;  // flattened p_XY (or p_X for univariate), empty = uniform
  std::string problem = "joint";     // univariate | joint | known-marginal
  std::string estimator = "add-constant";  // mle | add-constant | uniform
  std::string suite;                 // thm1 | thm2 | thm3 | thm4 | lemmas
  std::string sweep = "rates";       // rates | h-ratio | gamma
  std::optional<std::uint64_t> seed;
  std::uint64_t cap = 1'000'000;
  int draws = 0;                     // 0 = exact enumeration
  int max_iters = 500;
  std::string labeled_path;
  std::string unlabeled_path;
  std::string out;

  /// Throws InvalidArgument on any contract violation.
  void validate() const;
};

nlohmann::json to_json(const ExperimentConfig& config);

/// Fields present in `j` override those of `base`.
ExperimentConfig merge_config(const ExperimentConfig& base, const nlohmann::json& j);

/// 16 hex digits of FNV-1a over the canonical JSON dump.
std::string config_hash(const ExperimentConfig& config);

/// "4:64" (inclusive, step 1), "4:64:x2" (doubling), or "4,8,16".
std::vector<int> parse_int_range(const std::string& text);

std::vector<double> parse_double_list(const std::string& text);

}  // namespace sslab::lab
