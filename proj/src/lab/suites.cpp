#include "sslab/lab/suites.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

#include "sslab/asymptotics.hpp"
#include "sslab/error.hpp"
#include "sslab/estimators.hpp"
#include "sslab/game.hpp"
#include "sslab/lab/serialization.hpp"
#include "sslab/rng.hpp"
#include "sslab/risk.hpp"

namespace sslab::lab {

namespace {

CheckRecord record(std::string id, std::string description, double tolerance, bool ok,
                   nlohmann::json details = nlohmann::json::object()) {
  return {std::move(id), std::move(description), tolerance,
          ok ? CheckStatus::pass : CheckStatus::fail, std::move(details)};
}

// Runs `body`; an enumeration cap turns the check into a skipped record.
void guarded(std::vector<CheckRecord>& out, const std::string& id, const std::string& description,
             double tolerance, const std::function<void()>& body) {
  try {
    body();
  } catch (const CapExceeded& e) {
    out.push_back({id, description, tolerance, CheckStatus::skipped,
                   {{"reason", e.what()}, {"required", e.required()}, {"cap", e.cap()}}});
  }
}

std::vector<double> random_simplex(CounterRng& rng, std::size_t k) {
  std::vector<double> v(k);
  double s = 0.0;
  for (double& x : v) {
    x = -std::log(1.0 - rng.uniform01());
    s += x;
  }
  for (double& x : v) x /= s;
  return v;
}

double vertex_distance(std::span<const double> q) {
  double best = 2.0;
  for (std::size_t v = 0; v < q.size(); ++v) {
    double d = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      d = std::max(d, std::abs(q[i] - (i == v ? 1.0 : 0.0)));
    }
    best = std::min(best, d);
  }
  return best;
}

double l2_closed_form(int n, std::size_t k) {
  const double s = std::sqrt(static_cast<double>(n)) + 1.0;
  return (1.0 - 1.0 / static_cast<double>(k)) / (s * s);
}

UnivariateEstimator base_estimator(const std::string& name, std::size_t k) {
  if (name == "mle") return UnivariateEstimator::mle(k);
  if (name == "uniform") return UnivariateEstimator::uniform(k);
  return UnivariateEstimator::add_constant_l2(k);
}

std::vector<CheckRecord> suite_thm1(const ExperimentConfig& cfg) {
  std::vector<CheckRecord> out;
  const LossExponent l2(2.0);
  CounterRng rng(derive_stream_key(cfg.seed.value_or(0), 101));

  guarded(out, "risk-engine/mle-l2-identity", "exact MLE l2 risk equals (1 - sum p^2)/n", 1e-12,
          [&] {
            double worst = 0.0;
            for (std::size_t k : {2u, 3u}) {
              const auto est = UnivariateEstimator::mle(k);
              for (int n = 1; n <= 8; ++n) {
                UnivariateRiskEvaluator eval(est, n, l2, cfg.cap);
                for (int t = 0; t < 20; ++t) {
                  const auto p = random_simplex(rng, k);
                  double s2 = 0.0;
                  for (double v : p) s2 += v * v;
                  worst = std::max(worst, std::abs(eval(p) - (1.0 - s2) / n));
                }
              }
            }
            out.push_back(record("risk-engine/mle-l2-identity",
                                 "exact MLE l2 risk equals (1 - sum p^2)/n", 1e-12, worst <= 1e-12,
                                 {{"max_abs_error", worst}}));
          });

  guarded(out, "estimators/add-constant-constant-risk",
          "add-constant l2 risk is constant and equals (1-1/k)/(sqrt n + 1)^2", 1e-10, [&] {
            double worst = 0.0;
            for (std::size_t k : {2u, 3u}) {
              const auto est = UnivariateEstimator::add_constant_l2(k);
              for (int n = 1; n <= 12; ++n) {
                UnivariateRiskEvaluator eval(est, n, l2, cfg.cap);
                for (int t = 0; t < 20; ++t) {
                  worst = std::max(worst,
                                   std::abs(eval(random_simplex(rng, k)) - l2_closed_form(n, k)));
                }
              }
            }
            out.push_back(record("estimators/add-constant-constant-risk",
                                 "add-constant l2 risk is constant and equals (1-1/k)/(sqrt n + 1)^2",
                                 1e-10, worst <= 1e-10, {{"max_abs_error", worst}}));
          });

  const int m = std::max(cfg.m, 1);
  const auto base = UnivariateEstimator::add_constant_l2(cfg.ky);
  const RTable r = exact_l2_rtable(m, cfg.ky);

  guarded(out, "risk-engine/rbar-composition-identity",
          "known-marginal risk with point-mass rows equals rbar_objective(p_X)", 1e-12, [&] {
            KnownMarginalRiskEvaluator eval(base, cfg.kx, m, l2, cfg.cap);
            double worst_eq = 0.0;
            double worst_excess = -1.0;
            for (int t = 0; t < 20; ++t) {
              const auto px = random_simplex(rng, cfg.kx);
              const double target = rbar_objective(Pmf(px), r.values(), l2);
              std::vector<double> vertex_rows(cfg.kx * cfg.ky, 0.0);
              std::vector<double> random_rows(cfg.kx * cfg.ky, 0.0);
              for (std::size_t x = 0; x < cfg.kx; ++x) {
                vertex_rows[x * cfg.ky + (x % cfg.ky)] = px[x];
                const auto row = random_simplex(rng, cfg.ky);
                for (std::size_t y = 0; y < cfg.ky; ++y) random_rows[x * cfg.ky + y] = px[x] * row[y];
              }
              worst_eq = std::max(worst_eq, std::abs(eval(vertex_rows) - target));
              worst_excess = std::max(worst_excess, eval(random_rows) - target);
            }
            out.push_back(record("risk-engine/rbar-composition-identity",
                                 "known-marginal risk with point-mass rows equals rbar_objective(p_X)",
                                 1e-12, worst_eq <= 1e-12, {{"max_abs_error", worst_eq}}));
            out.push_back(record("risk-engine/rbar-composition-upper",
                                 "known-marginal risk never exceeds rbar_objective(p_X)", 1e-12,
                                 worst_excess <= 1e-12, {{"max_excess", worst_excess}}));
          });

  guarded(out, "risk-engine/rbar-max-matches-worst-case",
          "max of rbar_objective equals the worst-case known-marginal risk", 1e-6, [&] {
            const auto wc = worst_case_risk_known_marginal(base, cfg.kx, m, l2, {}, cfg.cap);
            const auto rb = rbar_maximize(cfg.kx, l2, r.values());
            const double diff = std::abs(wc.risk.value - rb.risk.value);
            out.push_back(record("risk-engine/rbar-max-matches-worst-case",
                                 "max of rbar_objective equals the worst-case known-marginal risk",
                                 1e-6, diff <= 1e-6,
                                 {{"m", m},
                                  {"worst_case_known_marginal", wc.risk.value},
                                  {"rbar_max", rb.risk.value}}));
          });
  return out;
}

std::vector<CheckRecord> suite_thm2(const ExperimentConfig& cfg) {
  std::vector<CheckRecord> out;
  const LossExponent l2(2.0);
  const int m_max = std::max(cfg.m, 2);
  for (int m = 2; m <= m_max; ++m) {
    const RTable r = exact_l2_rtable(m, cfg.ky);
    const auto rb = rbar_maximize(cfg.kx, l2, r.values());
    const auto& argmax = std::get<Pmf>(rb.argmax);
    const double dist = vertex_distance(argmax.probs());
    const double value_err = std::abs(rb.risk.value - r[m]);
    nlohmann::json details = {{"m", m}, {"kx", cfg.kx}, {"argmax", to_json(argmax)},
                              {"value", rb.risk.value}, {"r_m", r[m]}};
    out.push_back(record("risk-engine/rbar-argmax-vertex",
                         "rbar_objective is maximized at a vertex of the simplex", 1e-3,
                         dist <= 1e-3, details));
    out.push_back(record("risk-engine/rbar-value-equals-rm", "max rbar_objective equals r_m", 1e-9,
                         value_err <= 1e-9, details));
  }

  guarded(out, "risk-engine/rmp-bracket", "worst-case known-marginal risk lies in [r_m, kx r_m]",
          1e-9, [&] {
            const int m = std::max(cfg.m, 1);
            const auto base = UnivariateEstimator::add_constant_l2(cfg.ky);
            const auto wc = worst_case_risk_known_marginal(base, cfg.kx, m, l2, {}, cfg.cap);
            const auto r_m = RiskEstimate::exact(l2_closed_form(m, cfg.ky),
                                                 {2.0, m, 0, cfg.ky, 0});
            const auto b = rmp_bracket(r_m, cfg.kx);
            const bool ok = wc.risk.value >= b.lower - 1e-9 && wc.risk.value <= b.upper + 1e-9;
            out.push_back(record("risk-engine/rmp-bracket",
                                 "worst-case known-marginal risk lies in [r_m, kx r_m]", 1e-9, ok,
                                 {{"m", m}, {"value", wc.risk.value},
                                  {"bracket", {b.lower, b.upper}}}));
          });
  return out;
}

std::vector<int> default_n_values(const ExperimentConfig& cfg) {
  return cfg.n_values.empty() ? std::vector<int>{4, 8, 16, 32} : cfg.n_values;
}

std::vector<CheckRecord> suite_thm3(const ExperimentConfig& cfg) {
  std::vector<CheckRecord> out;
  const LossExponent l2(2.0);
  const int m = std::max(cfg.m, 1);
  const auto base = base_estimator(cfg.estimator, cfg.ky);
  const auto ns = default_n_values(cfg);

  guarded(out, "risk-engine/joint-gap-monotone",
          "worst-case joint risk minus known-marginal risk is nonincreasing in n", 1e-9, [&] {
            const double known =
                worst_case_risk_known_marginal(base, cfg.kx, m, l2, {}, cfg.cap).risk.value;
            std::vector<double> joint;
            for (int n : ns) {
              joint.push_back(
                  worst_case_risk_joint(base, cfg.kx, m, n, l2, {}, cfg.cap).risk.value);
            }
            bool monotone = true;
            bool above = true;
            for (std::size_t i = 0; i < joint.size(); ++i) {
              above = above && joint[i] >= known - 1e-9;
              if (i > 0) monotone = monotone && joint[i] <= joint[i - 1] + 1e-9;
            }
            nlohmann::json details = {{"m", m}, {"n", ns}, {"worst_case_joint", joint},
                                      {"worst_case_known_marginal", known}};
            out.push_back(record("risk-engine/joint-gap-monotone",
                                 "worst-case joint risk minus known-marginal risk is nonincreasing in n",
                                 1e-9, monotone, details));
            out.push_back(record("risk-engine/rm-le-rmn",
                                 "worst-case joint risk is at least the known-marginal risk", 1e-9,
                                 above, details));
          });

  {
    // m = sqrt(n): the bound should fall like n^-(1/4) n^-(1/2).
    std::vector<double> xs, ys;
    for (int e = 4; e <= 16; ++e) {
      const double n = std::ldexp(1.0, e);
      const double mm = std::sqrt(n);
      xs.push_back(n);
      ys.push_back(gamma_mn_bound(1.0 / mm, 1.0 / (mm + n), l2, cfg.ky));
    }
    const double slope = loglog_slope(xs, ys);
    out.push_back(record("asymptotics/gamma-slope",
                         "gamma bound with m = sqrt(n) has log-log slope -3/4 within 10%", 0.1,
                         std::abs(slope / -0.75 - 1.0) <= 0.1, {{"slope", slope}}));
  }
  return out;
}

std::vector<CheckRecord> suite_thm4(const ExperimentConfig& cfg) {
  std::vector<CheckRecord> out;
  const LossExponent loss(cfg.p);
  const LossExponent l2(2.0);
  const auto base = UnivariateEstimator::add_constant_l2(cfg.ky);

  guarded(out, "risk-engine/joint-first-order",
          "with n = m^2 the joint-to-known-marginal risk ratio decreases toward 1", 1e-9, [&] {
            std::vector<double> ratios;
            std::vector<int> ms;
            for (int m = 1; m <= std::max(cfg.m, 3); ++m) {
              const int n = m * m;
              const double known =
                  worst_case_risk_known_marginal(base, cfg.kx, m, l2, {}, cfg.cap).risk.value;
              const double joint =
                  worst_case_risk_joint(base, cfg.kx, m, n, l2, {}, cfg.cap).risk.value;
              ms.push_back(m);
              ratios.push_back(joint / known);
            }
            bool ok = true;
            for (std::size_t i = 1; i < ratios.size(); ++i) {
              ok = ok && ratios[i] <= ratios[i - 1] + 1e-9 && ratios[i] >= 1.0 - 1e-9;
            }
            out.push_back(record("risk-engine/joint-first-order",
                                 "with n = m^2 the joint-to-known-marginal risk ratio decreases toward 1",
                                 1e-9, ok, {{"m", ms}, {"ratio", ratios}}));
          });

  guarded(out, "minimax-game/rate-rnp-sandwich",
          "solver upper bound is below the MLE bound; scaled risks stay in a band", 0.0, [&] {
            FictitiousPlayConfig fp;
            fp.max_iters = cfg.max_iters;
            fp.bayes.cap = cfg.cap;
            bool below = true;
            bool contains = true;
            double lo = INFINITY, hi = 0.0;
            nlohmann::json rows = nlohmann::json::array();
            for (int n = 2; n <= std::max(cfg.n, 2); ++n) {
              const auto g = fictitious_play(cfg.ky, n, loss, fp);
              const double bound = mle_risk_upper(n, cfg.ky, loss);
              const double scale = std::pow(n, cfg.p / 2.0);
              below = below && g.bracket.upper <= bound;
              if (cfg.p == 2.0) {
                const double exact = l2_closed_form(n, cfg.ky);
                contains = contains && g.bracket.lower <= exact + 1e-12 &&
                           exact <= g.bracket.upper + 1e-12;
              }
              lo = std::min(lo, scale * g.bracket.lower);
              hi = std::max(hi, scale * g.bracket.upper);
              rows.push_back({{"n", n}, {"bracket", to_json(g.bracket)}, {"mle_upper", bound}});
            }
            const bool band = lo > 0.0 && lo <= hi;
            out.push_back(record("minimax-game/rate-rnp-sandwich",
                                 "solver upper bound is below the MLE bound; scaled risks stay in a band",
                                 0.0, below && band,
                                 {{"p", cfg.p}, {"band", {lo, hi}}, {"games", rows}}));
            if (cfg.p == 2.0) {
              out.push_back(record("minimax-game/l2-bracket-contains-closed-form",
                                   "p = 2 brackets contain (1-1/k)/(sqrt n + 1)^2", 1e-12, contains,
                                   {{"games", rows}}));
            }
          });
  return out;
}

std::vector<CheckRecord> suite_lemmas(const ExperimentConfig& cfg) {
  std::vector<CheckRecord> out;
  const std::uint64_t seed = cfg.seed.value_or(0);

  {
    CounterRng rng(derive_stream_key(seed, 201));
    double worst = -INFINITY;
    for (int t = 0; t < 10000; ++t) {
      const std::size_t d = 1 + static_cast<std::size_t>(rng.uniform01() * 10);
      const double q = 1.0 + 4.0 * rng.uniform01();
      const double p = q + 4.0 * rng.uniform01();
      double sq = 0.0, sp = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        const double v = 2.0 * rng.uniform01() - 1.0;
        sq += std::pow(std::abs(v), q);
        sp += std::pow(std::abs(v), p);
      }
      const double lhs = std::pow(sq, 1.0 / q);
      const double rhs = std::pow(static_cast<double>(d), 1.0 / q - 1.0 / p) * std::pow(sp, 1.0 / p);
      worst = std::max(worst, (lhs - rhs) / std::max(1.0, rhs));
    }
    out.push_back(record("core/norm-equiv", "||x||_q <= d^(1/q-1/p) ||x||_p for p >= q >= 1",
                         1e-12, worst <= 1e-12, {{"draws", 10000}, {"max_violation", worst}}));
  }
  {
    CounterRng rng(derive_stream_key(seed, 202));
    double worst = -INFINITY;
    for (int t = 0; t < 10000; ++t) {
      const double p = 2.0 + 6.0 * rng.uniform01();
      const double u = 4.0 * rng.uniform01() - 2.0;
      const double v = 4.0 * rng.uniform01() - 2.0;
      const double lhs = std::pow(std::abs(u + v), p);
      const double rhs = std::pow(2.0, p - 1.0) * (std::pow(std::abs(u), p) + std::pow(std::abs(v), p));
      worst = std::max(worst, (lhs - rhs) / std::max(1.0, rhs));
    }
    out.push_back(record("core/lp-triangle", "|u+v|^p <= 2^(p-1)(|u|^p + |v|^p)", 1e-12,
                         worst <= 1e-12, {{"draws", 10000}, {"max_violation", worst}}));
  }
  {
    CounterRng rng(derive_stream_key(seed, 203));
    double worst = 0.0;
    for (int t = 0; t < 10000; ++t) {
      const std::size_t k = 2 + static_cast<std::size_t>(rng.uniform01() * 6);
      const LossExponent loss(2.0 + 4.0 * rng.uniform01());
      worst = std::max(worst, lp_loss(Pmf(random_simplex(rng, k)), Pmf(random_simplex(rng, k)), loss));
    }
    out.push_back(record("core/loss-bounded", "lp_loss between simplex points is at most 2", 0.0,
                         worst <= 2.0, {{"max_loss", worst}}));
  }
  {
    CounterRng rng(derive_stream_key(seed, 204));
    const std::size_t kx = cfg.kx, ky = cfg.ky;
    const auto base = UnivariateEstimator::add_constant_l2(ky);
    bool local = true;
    bool marginal = true;
    double worst_marginal = 0.0;
    for (int t = 0; t < 1000; ++t) {
      const JointPmf pxy(kx, ky, random_simplex(rng, kx * ky));
      const int m = 1 + static_cast<int>(rng.uniform01() * 12);
      const int n = static_cast<int>(rng.uniform01() * 12);
      const Datasets d = sample_datasets(pxy, m, n, rng());
      const ConditionalPmf before = conditional_composition(base, d.labeled);
      // Perturb one slice and confirm only that row moves.
      const std::size_t target = static_cast<std::size_t>(rng.uniform01() * kx);
      std::vector<int> cells(d.labeled.values().begin(), d.labeled.values().end());
      cells[target * ky + static_cast<std::size_t>(rng.uniform01() * ky)] += 1;
      const ConditionalPmf after = conditional_composition(base, JointCounts(kx, ky, cells));
      for (std::size_t x = 0; x < kx; ++x) {
        if (x != target && !(before.row(x) == after.row(x))) local = false;
      }
      const JointPmf joint = joint_composition(base, d.unlabeled, d.labeled);
      const Pmf jm = joint.marginal_x();
      std::vector<int> pooled(kx);
      for (std::size_t x = 0; x < kx; ++x) pooled[x] = d.unlabeled[x] + d.labeled.row_total(x);
      const Pmf expected = mle(Counts(pooled));
      for (std::size_t x = 0; x < kx; ++x) {
        worst_marginal = std::max(worst_marginal, std::abs(jm[x] - expected[x]));
      }
    }
    marginal = worst_marginal <= 1e-15;
    out.push_back(record("estimators/composition-locality",
                         "changing slice x' leaves every other conditional row unchanged", 0.0,
                         local, {{"datasets", 1000}}));
    out.push_back(record("estimators/marginal-consistency",
                         "joint composition's X marginal equals the pooled MLE", 1e-15, marginal,
                         {{"datasets", 1000}, {"max_abs_error", worst_marginal}}));
  }
  {
    // Reduced-size version of the simulated tail check.
    CounterRng rng(derive_stream_key(seed, 205));
    const int trials = 100;
    const double prob = 0.3;
    const double mean = trials * prob;
    const int draws = 100000;
    std::binomial_distribution<int> binom(trials, prob);
    std::vector<int> samples(draws);
    for (int& s : samples) s = binom(rng);
    bool ok = true;
    nlohmann::json rows = nlohmann::json::array();
    for (double lambda : {5.0, 10.0, 15.0}) {
      const auto b = binomial_tail_bounds(mean, lambda);
      const double lo = std::count_if(samples.begin(), samples.end(),
                                      [&](int s) { return s <= mean - lambda; }) /
                        static_cast<double>(draws);
      const double hi = std::count_if(samples.begin(), samples.end(),
                                      [&](int s) { return s >= mean + lambda; }) /
                        static_cast<double>(draws);
      ok = ok && lo <= b.lower_tail && hi <= b.upper_tail;
      rows.push_back({{"lambda", lambda}, {"lower_freq", lo}, {"lower_bound", b.lower_tail},
                      {"upper_freq", hi}, {"upper_bound", b.upper_tail}});
    }
    out.push_back(record("asymptotics/binomial-tail",
                         "simulated Binomial(100, 0.3) tails stay below the bounds", 0.0, ok,
                         {{"draws", draws}, {"rows", rows}}));
  }
  {
    const auto f = [](double t) { return std::pow(t, 1.5); };
    const auto g = [](double t) { return t * t; };
    double lin = 0.0;
    bool monotone = true;
    for (int n : {4, 16, 64}) {
      for (double x : {0.1, 0.5, 0.9}) {
        const double combo = bernstein([&](double t) { return 2.0 * f(t) - 3.0 * g(t); }, n, x);
        lin = std::max(lin, std::abs(combo - (2.0 * bernstein(f, n, x) - 3.0 * bernstein(g, n, x))));
        // t^2 <= t^1.5 on [0, 1].
        monotone = monotone && bernstein(g, n, x) <= bernstein(f, n, x) + 1e-15;
      }
    }
    out.push_back(record("asymptotics/bernstein-linear-monotone",
                         "B_n is linear and monotone in f", 1e-12, lin <= 1e-12 && monotone,
                         {{"max_linearity_error", lin}}));
  }
  {
    const LossExponent l2(2.0);
    double worst = 0.0;
    for (int m : {2, 5, 9}) {
      const RTable r = exact_l2_rtable(m, cfg.ky);
      for (double a : {0.2, 0.5, 0.8}) {
        const double via_h = h_np(a, m, l2, r.values()) + h_np(1.0 - a, m, l2, r.values());
        worst = std::max(worst, std::abs(via_h - rbar_objective(Pmf({a, 1.0 - a}), r.values(), l2)));
      }
    }
    out.push_back(record("asymptotics/h-matches-rbar-summand",
                         "sum_x H^m_2(p_x) equals rbar_objective", 1e-12, worst <= 1e-12,
                         {{"max_abs_error", worst}}));
  }
  return out;
}

}  // namespace

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("slope needs >= 2 points");
  const double N = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (N * sxy - sx * sy) / (N * sxx - sx * sx);
}

std::vector<CheckRecord> run_suite(const std::string& suite, const ExperimentConfig& config) {
  if (suite == "thm1") return suite_thm1(config);
  if (suite == "thm2") return suite_thm2(config);
  if (suite == "thm3") return suite_thm3(config);
  if (suite == "thm4") return suite_thm4(config);
  if (suite == "lemmas") return suite_lemmas(config);
  throw InvalidArgument("unknown suite '" + suite + "'");
}

}  // namespace sslab::lab
