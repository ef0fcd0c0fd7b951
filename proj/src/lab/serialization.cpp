#include "sslab/lab/serialization.hpp"

#include "sslab/combinatorics.hpp"
#include "sslab/error.hpp"

namespace sslab::lab {

nlohmann::json to_json(const Pmf& pmf) {
  return std::vector<double>(pmf.probs().begin(), pmf.probs().end());
}

nlohmann::json to_json(const JointPmf& pmf) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t x = 0; x < pmf.kx(); ++x) {
    std::vector<double> row(pmf.ky());
    for (std::size_t y = 0; y < pmf.ky(); ++y) row[y] = pmf(x, y);
    rows.push_back(row);
  }
  return rows;
}

nlohmann::json to_json(const RiskEstimate& r) {
  return {{"value", r.value},
          {"method", to_string(r.method)},
          {"half_width", r.half_width},
          {"lower", r.lower},
          {"upper", r.upper},
          {"p", r.meta.p},
          {"n", r.meta.n},
          {"m", r.meta.m},
          {"kx", r.meta.kx},
          {"ky", r.meta.ky}};
}

nlohmann::json to_json(const WorstCaseResult& w) {
  nlohmann::json j = {{"risk", to_json(w.risk)}};
  j["argmax"] = std::visit([](const auto& a) { return to_json(a); }, w.argmax);
  j["trace_length"] = w.trace.size();
  return j;
}

nlohmann::json to_json(const GameBracket& b) {
  return {{"lower", b.lower},         {"upper", b.upper},
          {"width", b.width()},       {"midpoint", b.midpoint()},
          {"iterations", b.iterations}, {"converged", b.converged}};
}

nlohmann::json game_table_to_json(const UnivariateEstimator& est) {
  if (est.kind() != EstimatorKind::game_table) {
    throw InvalidArgument("only game-table estimators serialize to tables");
  }
  nlohmann::json tables = nlohmann::json::array();
  for (const auto& [n, table] : est.tables()) {
    nlohmann::json outcomes = nlohmann::json::array();
    nlohmann::json outputs = nlohmann::json::array();
    std::size_t i = 0;
    for_each_composition(n, table.alphabet_size(), [&](std::span<const int> c) {
      outcomes.push_back(std::vector<int>(c.begin(), c.end()));
      outputs.push_back(to_json(table.outputs()[i++]));
    });
    tables.push_back({{"n", n}, {"outcomes", outcomes}, {"outputs", outputs}});
  }
  return {{"schema_version", kSchemaVersion},
          {"k", est.alphabet_size()},
          {"tables", tables}};
}

UnivariateEstimator game_table_from_json(const nlohmann::json& j) {
  try {
    if (j.at("schema_version").get<int>() != kSchemaVersion) {
      throw InvalidArgument("unsupported game-table schema version");
    }
    const auto k = j.at("k").get<std::size_t>();
    std::vector<GameTable> tables;
    for (const auto& t : j.at("tables")) {
      const int n = t.at("n").get<int>();
      const auto& outcomes = t.at("outcomes");
      const auto& outputs = t.at("outputs");
      if (outcomes.size() != outputs.size()) throw ShapeMismatch("outcome/output count mismatch");
      // Re-key by composition order so a reordered file still loads correctly.
      std::map<std::vector<int>, std::vector<double>> by_outcome;
      for (std::size_t i = 0; i < outcomes.size(); ++i) {
        by_outcome[outcomes[i].get<std::vector<int>>()] = outputs[i].get<std::vector<double>>();
      }
      std::vector<Pmf> ordered;
      for_each_composition(n, k, [&](std::span<const int> c) {
        const auto it = by_outcome.find(std::vector<int>(c.begin(), c.end()));
        if (it == by_outcome.end()) throw ShapeMismatch("game table is missing an outcome");
        ordered.emplace_back(it->second);
      });
      tables.emplace_back(k, n, std::move(ordered));
    }
    return UnivariateEstimator::game_table(std::move(tables));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed game-table JSON: ") + e.what());
  }
}

}  // namespace sslab::lab
