#include "sslab/lab/report.hpp"

#include "sslab/lab/serialization.hpp"

namespace sslab::lab {

std::string to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::skipped: return "skipped";
  }
  return "unknown";
}

Report::Report(const ExperimentConfig& config) : config_(lab::to_json(config)) {}

void Report::add_check(CheckRecord record) { checks_.push_back(std::move(record)); }

void Report::add_result(const std::string& key, nlohmann::json value) {
  results_[key] = std::move(value);
}

bool Report::all_passed() const {
  for (const CheckRecord& c : checks_) {
    if (c.status == CheckStatus::fail) return false;
  }
  return true;
}

nlohmann::json Report::to_json() const {
  nlohmann::json checks = nlohmann::json::array();
  for (const CheckRecord& c : checks_) {
    checks.push_back({{"invariant", c.invariant},
                      {"description", c.description},
                      {"tolerance", c.tolerance},
                      {"status", to_string(c.status)},
                      {"details", c.details}});
  }
  return {{"schema_version", kSchemaVersion},
          {"tool_version", kToolVersion},
          {"config", config_},
          {"results", results_},
          {"checks", checks},
          {"all_passed", all_passed()},
          {"timing", {{"wall_clock_seconds", wall_clock_}}}};
}

}  // namespace sslab::lab
