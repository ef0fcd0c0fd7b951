#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "sslab/lab/config.hpp"
#include "sslab/lab/report.hpp"

namespace sslab::lab {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitConfigError = 2;

Report cmd_estimate(const ExperimentConfig& config);
Report cmd_risk(const ExperimentConfig& config);
Report cmd_worstcase(const ExperimentConfig& config);

/// `table` receives the game-table document (estimator plus bracket).
Report cmd_solve(const ExperimentConfig& config, nlohmann::json& table);

/// CSV text; the first line is a comment carrying the config hash.
std::string cmd_sweep(const ExperimentConfig& config);

Report cmd_verify(const ExperimentConfig& config);

/// Validates, dispatches on config.command and writes the output to
/// config.out (or `out`). Returns one of the kExit codes; errors go to `err`.
int run_command(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

}  // namespace sslab::lab
