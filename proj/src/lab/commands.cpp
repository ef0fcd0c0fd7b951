#include "sslab/lab/commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "sslab/asymptotics.hpp"
#include "sslab/error.hpp"
#include "sslab/game.hpp"
#include "sslab/lab/csv.hpp"
#include "sslab/lab/serialization.hpp"
#include "sslab/lab/suites.hpp"
#include "sslab/risk.hpp"

namespace sslab::lab {

namespace {

constexpr int kFallbackDraws = 100000;

UnivariateEstimator make_base(const ExperimentConfig& c) {
  if (c.estimator == "mle") return UnivariateEstimator::mle(c.ky);
  if (c.estimator == "uniform") return UnivariateEstimator::uniform(c.ky);
  return UnivariateEstimator::add_constant_l2(c.ky);
}

JointPmf target_joint(const ExperimentConfig& c) {
  if (c.distribution.empty()) return JointPmf::uniform(c.kx, c.ky);
  if (c.distribution.size() != c.kx * c.ky) {
    throw ShapeMismatch("distribution needs kx*ky entries");
  }
  return JointPmf(c.kx, c.ky, c.distribution);
}

Pmf target_univariate(const ExperimentConfig& c) {
  if (c.distribution.empty()) return Pmf::uniform(c.ky);
  if (c.distribution.size() != c.ky) throw ShapeMismatch("distribution needs ky entries");
  return Pmf(c.distribution);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write '" + path + "'");
  f << text;
  if (!f) throw Error("write to '" + path + "' failed");
}

std::string table_path(const std::string& out) {
  const auto dot = out.rfind(".json");
  const std::string stem = dot == std::string::npos ? out : out.substr(0, dot);
  return stem + ".table.json";
}

}  // namespace

Report cmd_estimate(const ExperimentConfig& c) {
  Report report(c);
  if (c.labeled_path.empty()) throw InvalidArgument("estimate needs a labeled CSV");
  const JointCounts labeled = read_labeled_file(c.labeled_path, c.kx, c.ky);
  const Counts unlabeled = c.unlabeled_path.empty() ? Counts::zeros(c.kx)
                                                    : read_unlabeled_file(c.unlabeled_path, c.kx);
  const auto base = make_base(c);
  report.add_result("labeled_total", labeled.total());
  report.add_result("unlabeled_total", unlabeled.total());
  report.add_result("joint_composition", to_json(joint_composition(base, unlabeled, labeled)));
  const ConditionalPmf cond = conditional_composition(base, labeled);
  nlohmann::json rows = nlohmann::json::array();
  for (const Pmf& row : cond.rows()) rows.push_back(to_json(row));
  report.add_result("conditional_composition", rows);
  if (labeled.total() > 0) {
    std::vector<int> cells(labeled.values().begin(), labeled.values().end());
    const Pmf flat = mle(Counts(cells));
    report.add_result("labeled_mle",
                      to_json(JointPmf(c.kx, c.ky, {flat.probs().begin(), flat.probs().end()})));
  }
  return report;
}

Report cmd_risk(const ExperimentConfig& c) {
  Report report(c);
  const LossExponent loss(c.p);
  const auto base = make_base(c);
  RiskEstimate risk;
  const auto monte_carlo = [&](int draws) {
    if (c.problem == "univariate") {
      return mc_risk_univariate(base, target_univariate(c), c.n, loss, draws, *c.seed);
    }
    if (c.problem == "joint") {
      return mc_risk_joint(base, target_joint(c), c.m, c.n, loss, draws, *c.seed);
    }
    throw InvalidArgument("Monte-Carlo risk is not available for the known-marginal problem");
  };
  if (c.draws > 0) {
    risk = monte_carlo(c.draws);
  } else {
    try {
      if (c.problem == "univariate") {
        risk = exact_risk_univariate(base, target_univariate(c), c.n, loss, c.cap);
      } else if (c.problem == "joint") {
        risk = exact_risk_joint(base, target_joint(c), c.m, c.n, loss, c.cap);
      } else {
        risk = exact_risk_known_marginal(base, target_joint(c), c.m, loss, c.cap);
      }
    } catch (const CapExceeded& e) {
      if (!c.seed) throw;
      report.add_result("fallback", e.what());
      risk = monte_carlo(kFallbackDraws);
    }
  }
  report.add_result("risk", to_json(risk));
  return report;
}

Report cmd_worstcase(const ExperimentConfig& c) {
  Report report(c);
  const LossExponent loss(c.p);
  const auto base = make_base(c);
  WorstCaseResult w = [&] {
    if (c.problem == "univariate") return worst_case_risk(base, c.n, loss, {}, c.cap);
    if (c.problem == "joint") return worst_case_risk_joint(base, c.kx, c.m, c.n, loss, {}, c.cap);
    return worst_case_risk_known_marginal(base, c.kx, c.m, loss, {}, c.cap);
  }();
  report.add_result("worst_case", to_json(w));
  return report;
}

Report cmd_solve(const ExperimentConfig& c, nlohmann::json& table) {
  Report report(c);
  const LossExponent loss(c.p);
  FictitiousPlayConfig fp;
  fp.max_iters = c.max_iters;
  fp.bayes.cap = c.cap;
  const GameResult g = fictitious_play(c.ky, c.n, loss, fp);

  nlohmann::json atoms = nlohmann::json::array();
  for (const Atom& a : g.prior.atoms()) atoms.push_back({{"weight", a.weight}, {"pmf", to_json(a.pmf)}});
  report.add_result("bracket", to_json(g.bracket));
  report.add_result("prior", atoms);
  report.add_result("risk", to_json(RiskEstimate::bracket(
                                g.bracket.lower, g.bracket.upper, {c.p, c.n, 0, c.ky, 0})));

  report.add_check({"minimax-game/bracket-ordered", "bracket lower <= upper", 0.0,
                    g.bracket.lower <= g.bracket.upper ? CheckStatus::pass : CheckStatus::fail,
                    {{"lower", g.bracket.lower}, {"upper", g.bracket.upper}}});
  report.add_check({"minimax-game/converged",
                    "bracket width reached the tolerance within max_iters", 1e-3,
                    g.bracket.converged ? CheckStatus::pass : CheckStatus::fail,
                    {{"iterations", g.bracket.iterations}, {"width", g.bracket.width()}}});

  table = game_table_to_json(g.estimator);
  table["bracket"] = to_json(g.bracket);
  table["p"] = c.p;
  return report;
}

std::string cmd_sweep(const ExperimentConfig& c) {
  c.validate();
  const LossExponent loss(c.p);
  std::ostringstream csv;
  csv << std::setprecision(17);
  csv << "# sslab sweep=" << c.sweep << " config_hash=" << config_hash(c) << "\n";

  int max_n = 0;
  for (int n : c.n_values) {
    if (n < 0) throw InvalidArgument("sweep sample sizes must be nonnegative");
    max_n = std::max(max_n, n);
  }

  FictitiousPlayConfig fp;
  fp.max_iters = c.max_iters;
  fp.bayes.cap = c.cap;

  if (c.sweep == "rates") {
    csv << "n,p,lower,upper,scaled_lower,scaled_upper\n";
    std::vector<RatePoint> points;
    for (int n : c.n_values) {
      if (n < 1) throw InvalidArgument("rates sweep needs n >= 1");
      double lo = 0.0, hi = 0.0;
      if (c.estimator == "add-constant") {
        // The minimax risk itself: closed form at p = 2, a game bracket otherwise.
        if (c.p == 2.0) {
          lo = hi = exact_l2_rtable(n, c.ky)[static_cast<std::size_t>(n)];
        } else {
          const auto g = fictitious_play(c.ky, n, loss, fp);
          lo = g.bracket.lower;
          hi = g.bracket.upper;
        }
      } else {
        lo = hi = worst_case_risk(make_base(c), n, loss, {}, c.cap).risk.value;
      }
      points.push_back({n, lo, hi});
      const double s = std::pow(static_cast<double>(n), c.p / 2.0);
      csv << n << ',' << c.p << ',' << lo << ',' << hi << ',' << s * lo << ',' << s * hi << "\n";
    }
    if (points.size() >= 4) {
      const RateConstant rc = rate_constants(points, loss);
      csv << "# c_inf=" << rc.c_inf << " c_sup=" << rc.c_sup << " window_start=" << rc.window_start
          << "\n";
    }
  } else if (c.sweep == "h-ratio") {
    std::vector<double> r;
    if (c.p == 2.0) {
      const RTable t = exact_l2_rtable(max_n, c.ky);
      r.assign(t.values().begin(), t.values().end());
    } else {
      const SolvedFamily fam = solve_family(c.ky, max_n, loss, fp);
      r.assign(fam.rtable.values().begin(), fam.rtable.values().end());
    }
    // C_p from the tail of the same table.
    std::vector<RatePoint> tail;
    for (int n = 1; n <= max_n; ++n) tail.push_back({n, r[n], r[n]});
    if (tail.size() < 4) throw InvalidArgument("h-ratio sweep needs max n >= 4");
    const double cp = rate_constants(tail, loss).midpoint();
    csv << "n,x,p,H,G,ratio,bound\n";
    for (int n : c.n_values) {
      if (n < 1) throw InvalidArgument("h-ratio sweep needs n >= 1");
      const std::span<const double> rn(r.data(), static_cast<std::size_t>(n) + 1);
      for (double x : c.xs) {
        const double h = h_np(x, n, loss, rn);
        const double g = g_np(x, n, loss, rn);
        const double bound = cp * std::pow(x / n, c.p / 2.0);
        csv << n << ',' << x << ',' << c.p << ',' << h << ',' << g << ',' << h / bound << ','
            << bound << "\n";
      }
    }
  } else {
    // m = sqrt(n), with R_m and r_{m+n} at their n^(-p/2) orders.
    csv << "m,n,p,R_m,r_mn,gamma\n";
    std::vector<double> ns, gs;
    for (int n : c.n_values) {
      if (n < 1) throw InvalidArgument("gamma sweep needs n >= 1");
      const double m = std::sqrt(static_cast<double>(n));
      const double rm = std::pow(m, -c.p / 2.0);
      const double rmn = std::pow(m + n, -c.p / 2.0);
      const double g = gamma_mn_bound(rm, rmn, loss, c.ky);
      ns.push_back(n);
      gs.push_back(g);
      csv << m << ',' << n << ',' << c.p << ',' << rm << ',' << rmn << ',' << g << "\n";
    }
    if (ns.size() >= 2) csv << "# loglog_slope=" << loglog_slope(ns, gs) << "\n";
  }
  return csv.str();
}

Report cmd_verify(const ExperimentConfig& c) {
  Report report(c);
  for (CheckRecord& r : run_suite(c.suite, c)) report.add_check(std::move(r));
  return report;
}

int run_command(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  const auto emit = [&](const std::string& text) {
    if (c.out.empty()) {
      out << text;
    } else {
      write_text(c.out, text);
    }
  };
  try {
    c.validate();
    if (c.command == "sweep") {
      emit(cmd_sweep(c));
      return kExitPass;
    }
    Report report(c);
    if (c.command == "estimate") {
      report = cmd_estimate(c);
    } else if (c.command == "risk") {
      report = cmd_risk(c);
    } else if (c.command == "worstcase") {
      report = cmd_worstcase(c);
    } else if (c.command == "solve") {
      nlohmann::json table;
      report = cmd_solve(c, table);
      if (c.out.empty()) {
        report.add_result("table", table);
      } else {
        write_text(table_path(c.out), table.dump(2) + "\n");
        report.add_result("table_path", table_path(c.out));
      }
    } else if (c.command == "verify") {
      report = cmd_verify(c);
    } else {
      throw InvalidArgument("unknown command '" + c.command + "'");
    }
    report.set_wall_clock(elapsed());
    emit(report.to_json().dump(2) + "\n");
    return report.all_passed() ? kExitPass : kExitFail;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
}

}  // namespace sslab::lab
