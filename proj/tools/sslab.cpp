// sslab: estimate, risk, worstcase, solve, sweep, verify.
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sslab/error.hpp"
#include "sslab/lab/commands.hpp"

using sslab::lab::ExperimentConfig;

int main(int argc, char** argv) {
  CLI::App app{"Semi-supervised pmf estimation lab"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  std::string config_path, n_range, xs, dist;
  std::uint64_t seed = 0;

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--p", cfg.p, "loss exponent (>= 2)");
    sub->add_option("--kx", cfg.kx, "X alphabet size");
    sub->add_option("--ky", cfg.ky, "Y alphabet size");
    sub->add_option("--m", cfg.m, "labeled sample size");
    sub->add_option("--n", cfg.n, "unlabeled (or univariate) sample size");
    sub->add_option("--seed", seed, "master seed");
    sub->add_option("--cap", cfg.cap, "exact enumeration cap");
    sub->add_option("--out", cfg.out, "output path (stdout if omitted)");
    sub->add_option("--config", config_path, "JSON config; its fields override flags");
    sub->add_option("--estimator", cfg.estimator, "mle | add-constant | uniform");
  };

  auto* estimate = app.add_subcommand("estimate", "joint composition from CSV datasets");
  common(estimate);
  estimate->add_option("--labeled", cfg.labeled_path, "CSV with header x,y");
  estimate->add_option("--unlabeled", cfg.unlabeled_path, "CSV with header x");

  auto* risk = app.add_subcommand("risk", "risk at a fixed distribution");
  auto* worst = app.add_subcommand("worstcase", "worst-case risk over the simplex");
  for (auto* sub : {risk, worst}) {
    common(sub);
    sub->add_option("--problem", cfg.problem, "univariate | joint | known-marginal");
  }
  risk->add_option("--dist", dist, "comma-separated pmf (row-major p_XY for joint problems)");
  risk->add_option("--draws", cfg.draws, "Monte-Carlo draws (0 = exact)");

  auto* solve = app.add_subcommand("solve", "fictitious play for the univariate minimax risk");
  common(solve);
  solve->add_option("--max-iters", cfg.max_iters, "fictitious play iterations");

  auto* sweep = app.add_subcommand("sweep", "CSV sweeps: rates, h-ratio, gamma");
  common(sweep);
  sweep->add_option("--kind", cfg.sweep, "rates | h-ratio | gamma");
  sweep->add_option("--range", n_range, "n values: 4:64, 4:64:x2 or 4,8,16");
  sweep->add_option("--xs", xs, "x values for h-ratio, comma-separated");
  sweep->add_option("--max-iters", cfg.max_iters, "fictitious play iterations (p > 2)");

  auto* verify = app.add_subcommand("verify", "run an invariant suite");
  common(verify);
  verify->add_option("--suite", cfg.suite, "thm1 | thm2 | thm3 | thm4 | lemmas");
  verify->add_option("--range", n_range, "n values for thm3");
  verify->add_option("--max-iters", cfg.max_iters, "fictitious play iterations");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : sslab::lab::kExitConfigError;
  }

  try {
    cfg.command = app.get_subcommands().front()->get_name();
    if (app.get_subcommands().front()->count("--seed") > 0) cfg.seed = seed;
    cfg.n_values = sslab::lab::parse_int_range(n_range);
    cfg.xs = sslab::lab::parse_double_list(xs);
    cfg.distribution = sslab::lab::parse_double_list(dist);
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw sslab::Error("cannot open config '" + config_path + "'");
      cfg = sslab::lab::merge_config(cfg, nlohmann::json::parse(in));
      cfg.command = app.get_subcommands().front()->get_name();
    }
  } catch (const sslab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return sslab::lab::kExitConfigError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return sslab::lab::kExitConfigError;
  }
  return sslab::lab::run_command(cfg, std::cout, std::cerr);
}
