#include "sslab/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sslab/combinatorics.hpp"

namespace sslab {

NatureStrategy::NatureStrategy(Pmf single_atom) { add(single_atom, 1.0); }

void NatureStrategy::add(const Pmf& pmf, double weight) {
  if (!(weight > 0.0)) throw InvalidArgument("atom weight must be positive");
  if (!atoms_.empty() && pmf.size() != atoms_.front().pmf.size()) {
    throw ShapeMismatch("prior atoms must share an alphabet");
  }
  for (Atom& a : atoms_) {
    double dist = 0.0;
    for (std::size_t i = 0; i < pmf.size(); ++i) dist = std::max(dist, std::abs(a.pmf[i] - pmf[i]));
    if (dist < kAtomMergeDistance) {
      a.weight += weight;
      total_weight_ += weight;
      return;
    }
  }
  atoms_.push_back({weight, pmf});
  total_weight_ += weight;
}

std::vector<Atom> NatureStrategy::atoms() const {
  std::vector<Atom> out = atoms_;
  for (Atom& a : out) a.weight /= total_weight_;
  return out;
}

std::size_t NatureStrategy::alphabet_size() const {
  return atoms_.empty() ? 0 : atoms_.front().pmf.size();
}

namespace {

double posterior_objective(const std::vector<const Pmf*>& atoms, const std::vector<double>& post,
                           std::span<const double> q, double p) {
  double f = 0.0;
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    if (post[j] == 0.0) continue;
    f += post[j] * lp_distance_pow(atoms[j]->probs(), q, p);
  }
  return f;
}

// Convex in q; the fixed step 1/(p 2^(p-1)) is below the inverse curvature bound.
std::vector<double> minimize_posterior_loss(const std::vector<const Pmf*>& atoms,
                                            const std::vector<double>& post,
                                            std::vector<double> q, double p,
                                            const BayesOptions& opt) {
  const std::size_t k = q.size();
  const double step = 1.0 / (p * std::pow(2.0, p - 1.0));
  double f = posterior_objective(atoms, post, q, p);
  std::vector<double> grad(k);
  std::vector<double> trial(k);
  for (int s = 0; s < opt.max_steps; ++s) {
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t j = 0; j < atoms.size(); ++j) {
      if (post[j] == 0.0) continue;
      for (std::size_t x = 0; x < k; ++x) {
        const double d = q[x] - (*atoms[j])[x];
        grad[x] += post[j] * p * std::copysign(std::pow(std::abs(d), p - 1.0), d);
      }
    }
    for (std::size_t x = 0; x < k; ++x) trial[x] = q[x] - step * grad[x];
    std::vector<double> next = project_to_simplex(trial);
    const double f_next = posterior_objective(atoms, post, next, p);
    if (!(f_next < f)) break;
    const double gain = f - f_next;
    q = std::move(next);
    f = f_next;
    if (gain < opt.tolerance) break;
  }
  return q;
}

}  // namespace

BayesResponse bayes_response(const NatureStrategy& prior, int n, const LossExponent& loss,
                             const BayesOptions& options, const UnivariateEstimator* warm_start) {
  if (prior.empty()) throw InvalidArgument("prior has no atoms");
  if (n < 0) throw InvalidArgument("sample size must be nonnegative");
  const std::size_t k = prior.alphabet_size();
  const std::uint64_t outcomes = composition_count(n, k);
  if (outcomes > options.cap) throw CapExceeded(outcomes, options.cap);
  if (warm_start != nullptr &&
      (warm_start->alphabet_size() != k || !warm_start->covers(n))) {
    warm_start = nullptr;
  }

  const std::vector<Atom> atoms = prior.atoms();
  const std::size_t J = atoms.size();
  std::vector<const Pmf*> atom_ptrs(J);
  std::vector<std::vector<double>> log_atoms(J, std::vector<double>(k));
  for (std::size_t j = 0; j < J; ++j) {
    atom_ptrs[j] = &atoms[j].pmf;
    for (std::size_t x = 0; x < k; ++x) {
      const double v = atoms[j].pmf[x];
      log_atoms[j][x] = v > 0.0 ? std::log(v) : -std::numeric_limits<double>::infinity();
    }
  }

  const double p = loss.p();
  std::vector<Pmf> outputs;
  outputs.reserve(outcomes);
  std::vector<double> risk_terms;
  std::size_t zero_posterior = 0;
  std::vector<double> log_joint(J);
  std::vector<double> post(J);

  for_each_composition(n, k, [&](std::span<const int> c) {
    const double log_coef = log_multinomial_coefficient(c);
    double max_log = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < J; ++j) {
      double lj = std::log(atoms[j].weight) + log_coef;
      for (std::size_t x = 0; x < k; ++x) {
        if (c[x] != 0) lj += c[x] * log_atoms[j][x];
      }
      log_joint[j] = lj;
      max_log = std::max(max_log, lj);
    }
    if (max_log == -std::numeric_limits<double>::infinity()) {
      ++zero_posterior;
      outputs.push_back(Pmf::uniform(k));
      return;
    }
    double norm = 0.0;
    for (std::size_t j = 0; j < J; ++j) {
      post[j] = std::exp(log_joint[j] - max_log);
      norm += post[j];
    }
    for (double& w : post) w /= norm;

    std::vector<double> q(k, 0.0);
    for (std::size_t j = 0; j < J; ++j) {
      for (std::size_t x = 0; x < k; ++x) q[x] += post[j] * atoms[j].pmf[x];
    }
    if (p != 2.0) {
      if (warm_start != nullptr) {
        const Pmf w = (*warm_start)(Counts(std::vector<int>(c.begin(), c.end())));
        q.assign(w.probs().begin(), w.probs().end());
      }
      q = minimize_posterior_loss(atom_ptrs, post, std::move(q), p, options);
    }
    // Marginal probability of c times the posterior expected loss.
    const double marginal = std::exp(max_log) * norm;
    risk_terms.push_back(marginal * posterior_objective(atom_ptrs, post, q, p));
    outputs.emplace_back(std::move(q));
  });

  std::vector<GameTable> tables;
  tables.emplace_back(k, n, std::move(outputs));
  return {UnivariateEstimator::game_table(std::move(tables)), pairwise_sum(risk_terms),
          zero_posterior};
}

WorstCaseResult nature_best_response(const UnivariateEstimator& est, int n,
                                     const LossExponent& loss, const SearchConfig& config,
                                     std::uint64_t cap) {
  return worst_case_risk(est, n, loss, config, cap);
}

SearchConfig game_search_config(std::size_t k, std::size_t budget) {
  SearchConfig cfg;
  int d = cfg.grid_divisions;
  while (composition_count(d * 2, k) <= budget) d *= 2;
  cfg.grid_divisions = d;
  return cfg;
}

GameResult fictitious_play(std::size_t k, int n, const LossExponent& loss,
                           const FictitiousPlayConfig& config) {
  if (k < 2) throw InvalidArgument("alphabet size must be >= 2");
  if (n < 0) throw InvalidArgument("sample size must be nonnegative");
  if (config.max_iters < 1) throw InvalidArgument("max_iters must be >= 1");
  const SearchConfig search = config.search.value_or(game_search_config(k));

  NatureStrategy prior(Pmf::uniform(k));
  GameBracket bracket;
  std::optional<UnivariateEstimator> best;
  std::optional<UnivariateEstimator> previous;
  std::vector<BracketStep> history;

  for (int t = 1; t <= config.max_iters; ++t) {
    BayesResponse response = bayes_response(prior, n, loss, config.bayes,
                                            previous ? &*previous : nullptr);
    bracket.lower = std::max(bracket.lower, response.bayes_risk);
    const WorstCaseResult reply =
        nature_best_response(response.estimator, n, loss, search, config.bayes.cap);
    if (!best || reply.risk.value < bracket.upper) {
      bracket.upper = reply.risk.value;
      best = response.estimator;
    }
    history.push_back({bracket.lower, bracket.upper});
    bracket.iterations = t;
    const double width = bracket.upper - bracket.lower;
    if (width < config.tolerance || width < config.relative_tolerance * bracket.upper) {
      bracket.converged = true;
      break;
    }
    prior.add(std::get<Pmf>(reply.argmax), 1.0);
    previous = std::move(response.estimator);
  }
  return {bracket, std::move(*best), std::move(prior), std::move(history)};
}

SolvedFamily solve_family(std::size_t k, int max_n, const LossExponent& loss,
                          const FictitiousPlayConfig& config) {
  if (max_n < 0) throw InvalidArgument("max_n must be nonnegative");
  std::vector<GameBracket> brackets;
  std::vector<double> mids, widths;
  std::vector<GameTable> tables;
  for (int n = 0; n <= max_n; ++n) {
    GameResult g = fictitious_play(k, n, loss, config);
    brackets.push_back(g.bracket);
    mids.push_back(g.bracket.midpoint());
    widths.push_back(g.bracket.width());
    tables.push_back(g.estimator.tables().at(n));
  }
  return {std::move(brackets), RTable(std::move(mids), std::move(widths)),
          UnivariateEstimator::game_table(std::move(tables))};
}

}  // namespace sslab
