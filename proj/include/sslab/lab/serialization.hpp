#pragma once

#include <json.hpp>

#include "sslab/core.hpp"
#include "sslab/estimators.hpp"
#include "sslab/game.hpp"
#include "sslab/risk.hpp"

namespace sslab::lab {

inline constexpr int kSchemaVersion = 1;

nlohmann::json to_json(const Pmf& pmf);
nlohmann::json to_json(const JointPmf& pmf);
nlohmann::json to_json(const RiskEstimate& risk);
nlohmann::json to_json(const WorstCaseResult& result);
nlohmann::json to_json(const GameBracket& bracket);

/// {"schema_version", "k", "tables": [{"n", "outcomes": [[counts], ...], "outputs": [[q], ...]}]}
nlohmann::json game_table_to_json(const UnivariateEstimator& est);

/// Inverse of game_table_to_json; checks the schema version and table shapes.
UnivariateEstimator game_table_from_json(const nlohmann::json& j);

}  // namespace sslab::lab
