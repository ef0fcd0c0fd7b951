#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "sslab/lab/config.hpp"

namespace sslab::lab {

inline constexpr const char* kToolVersion = "0.1.0";

enum class CheckStatus { pass, fail, skipped };

std::string to_string(CheckStatus status);

struct CheckRecord {
  std::string invariant;  ///< stable identifier, e.g. "risk-engine/mle-l2-identity"
  std::string description;
  double tolerance = 0.0;
  CheckStatus status = CheckStatus::pass;
  nlohmann::json details = nlohmann::json::object();
};

/// Skipped records (enumeration cap hit) do not count as failures.
class Report {
 public:
  explicit Report(const ExperimentConfig& config);

  void add_check(CheckRecord record);
  void add_result(const std::string& key, nlohmann::json value);
  void set_wall_clock(double seconds) { wall_clock_ = seconds; }

  bool all_passed() const;
  const std::vector<CheckRecord>& checks() const { return checks_; }

  /// Everything outside the "timing" block is reproducible bit-for-bit.
  nlohmann::json to_json() const;

 private:
  nlohmann::json config_;
  std::vector<CheckRecord> checks_;
  nlohmann::json results_ = nlohmann::json::object();
  double wall_clock_ = 0.0;
};

}  // namespace sslab::lab
