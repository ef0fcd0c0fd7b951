#include "sslab/lab/config.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "sslab/error.hpp"

namespace sslab::lab {

namespace {

bool one_of(const std::string& v, std::initializer_list<const char*> options) {
  for (const char* o : options) {
    if (v == o) return true;
  }
  return false;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (!std::isfinite(p) || p < 2.0) {
    throw InvalidArgument("p must satisfy p >= 2, got " + std::to_string(p));
  }
  if (kx < 2 || ky < 2) throw InvalidArgument("need kx >= 2 and ky >= 2");
  if (m < 0 || n < 0) throw InvalidArgument("sample sizes must be nonnegative");
  if (cap == 0) throw InvalidArgument("cap must be positive");
  if (draws != 0 && draws < 100) throw InvalidArgument("draws must be 0 (exact) or >= 100");
  if (max_iters < 1) throw InvalidArgument("max_iters must be >= 1");
  if (!one_of(problem, {"univariate", "joint", "known-marginal"})) {
    throw InvalidArgument("unknown problem '" + problem + "'");
  }
  if (!one_of(estimator, {"mle", "add-constant", "uniform"})) {
    throw InvalidArgument("unknown estimator '" + estimator + "'");
  }
  if (command == "sweep") {
    if (!one_of(sweep, {"rates", "h-ratio", "gamma"})) {
      throw InvalidArgument("unknown sweep '" + sweep + "'");
    }
    if (n_values.empty()) throw InvalidArgument("sweep range is empty");
    if (sweep == "h-ratio" && xs.empty()) throw InvalidArgument("h-ratio sweep needs x values");
  }
  if (command == "verify" && !one_of(suite, {"thm1", "thm2", "thm3", "thm4", "lemmas"})) {
    throw InvalidArgument("unknown suite '" + suite + "'");
  }
  const bool stochastic = draws > 0 || command == "verify";
  if (stochastic && !seed) throw InvalidArgument("command '" + command + "' needs a seed");
}

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j = {
      {"command", c.command},   {"kx", c.kx},
      {"ky", c.ky},             {"p", c.p},
      {"m", c.m},               {"n", c.n},
      {"n_values", c.n_values}, {"xs", c.xs},
      {"distribution", c.distribution},
      {"problem", c.problem},   {"estimator", c.estimator},
      {"suite", c.suite},       {"sweep", c.sweep},
      {"cap", c.cap},           {"draws", c.draws},
      {"max_iters", c.max_iters},
      {"labeled", c.labeled_path},
      {"unlabeled", c.unlabeled_path},
      {"out", c.out},
  };
  j["seed"] = c.seed ? nlohmann::json(*c.seed) : nlohmann::json(nullptr);
  return j;
}

ExperimentConfig merge_config(const ExperimentConfig& base, const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
  ExperimentConfig c = base;
  try {
    auto take = [&](const char* key, auto& field) {
      if (j.contains(key)) j.at(key).get_to(field);
    };
    take("command", c.command);
    take("kx", c.kx);
    take("ky", c.ky);
    take("p", c.p);
    take("m", c.m);
    take("n", c.n);
    take("n_values", c.n_values);
    take("xs", c.xs);
    take("distribution", c.distribution);
    take("problem", c.problem);
    take("estimator", c.estimator);
    take("suite", c.suite);
    take("sweep", c.sweep);
    take("cap", c.cap);
    take("draws", c.draws);
    take("max_iters", c.max_iters);
    take("labeled", c.labeled_path);
    take("unlabeled", c.unlabeled_path);
    take("out", c.out);
    if (j.contains("seed")) {
      if (j.at("seed").is_null()) {
        c.seed.reset();
      } else {
        c.seed = j.at("seed").get<std::uint64_t>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("bad config field: ") + e.what());
  }
  return c;
}

std::string config_hash(const ExperimentConfig& config) {
  const std::string text = to_json(config).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<int> parse_int_range(const std::string& text) {
  std::vector<int> out;
  if (text.empty()) return out;
  try {
    if (text.find(':') != std::string::npos) {
      std::vector<std::string> parts;
      std::stringstream ss(text);
      for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
      if (parts.size() < 2 || parts.size() > 3) throw InvalidArgument("bad range '" + text + "'");
      const int lo = std::stoi(parts[0]);
      const int hi = std::stoi(parts[1]);
      if (parts.size() == 3 && !parts[2].empty() && parts[2][0] == 'x') {
        const int factor = std::stoi(parts[2].substr(1));
        if (factor < 2 || lo < 1) throw InvalidArgument("bad geometric range '" + text + "'");
        for (long v = lo; v <= hi; v *= factor) out.push_back(static_cast<int>(v));
      } else {
        const int step = parts.size() == 3 ? std::stoi(parts[2]) : 1;
        if (step < 1) throw InvalidArgument("bad range step in '" + text + "'");
        for (int v = lo; v <= hi; v += step) out.push_back(v);
      }
    } else {
      std::stringstream ss(text);
      for (std::string part; std::getline(ss, part, ',');) {
        if (!part.empty()) out.push_back(std::stoi(part));
      }
    }
  } catch (const std::logic_error&) {
    throw InvalidArgument("bad integer range '" + text + "'");
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  try {
    for (std::string part; std::getline(ss, part, ',');) {
      if (!part.empty()) out.push_back(std::stod(part));
    }
  } catch (const std::logic_error&) {
    throw InvalidArgument("bad number list '" + text + "'");
  }
  return out;
}

}  // namespace sslab::lab
