#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sslab/combinatorics.hpp"
#include "sslab/game.hpp"

using namespace sslab;

TEST_CASE("nature strategy merges nearby atoms") {
  NatureStrategy s(Pmf::uniform(2));
  s.add(Pmf({0.5 + 5e-7, 0.5 - 5e-7}), 1.0);
  CHECK(s.size() == 1);
  s.add(Pmf({0.9, 0.1}), 2.0);
  CHECK(s.size() == 2);
  const auto atoms = s.atoms();
  CHECK(atoms[0].weight == doctest::Approx(0.5));
  CHECK(atoms[1].weight == doctest::Approx(0.5));
  CHECK_THROWS_AS(s.add(Pmf::uniform(3), 1.0), ShapeMismatch);
  CHECK_THROWS_AS(s.add(Pmf::uniform(2), 0.0), InvalidArgument);
}

TEST_CASE("bayes response examples") {
  const LossExponent l2(2.0), l4(4.0);
  const Pmf p0({0.3, 0.7});
  const auto single = bayes_response(NatureStrategy(p0), 3, l2);
  for_each_composition(3, 2, [&](std::span<const int> c) {
    const Pmf q = single.estimator(Counts(std::vector<int>(c.begin(), c.end())));
    CHECK(std::abs(q[0] - 0.3) < 1e-12);
  });
  CHECK(single.bayes_risk < 1e-24);

  NatureStrategy two(Pmf({0.2, 0.8}));
  two.add(Pmf({0.6, 0.4}), 1.0);
  const Pmf avg = bayes_response(two, 0, l2).estimator(Counts::zeros(2));
  CHECK(std::abs(avg[0] - 0.4) < 1e-12);

  NatureStrategy sym(Pmf({0.8, 0.2}));
  sym.add(Pmf({0.2, 0.8}), 1.0);
  const auto r4 = bayes_response(sym, 0, l4);
  const Pmf q4 = r4.estimator(Counts::zeros(2));
  const auto grid = oracle::grid_max_1d(
      [](oracle::ld q) {
        return -(0.5L * oracle::lp({0.8L, 0.2L}, {q, 1 - q}, 4) +
                 0.5L * oracle::lp({0.2L, 0.8L}, {q, 1 - q}, 4));
      },
      100000);
  CHECK(std::abs(q4[0] - 0.5) < 1e-4);
  CHECK(std::abs(q4[0] - static_cast<double>(grid.argmax)) < 1e-4);
  CHECK(std::abs(r4.bayes_risk + static_cast<double>(grid.value)) < 1e-9);

  NatureStrategy vertex(Pmf::point_mass(2, 0));
  const auto z = bayes_response(vertex, 2, l2);
  CHECK(z.zero_posterior_outcomes == 2);
  const Pmf u = z.estimator(Counts({0, 2}));
  CHECK(u[0] == doctest::Approx(0.5));
}

TEST_CASE("fictitious play, p = 2") {
  const LossExponent l2(2.0);
  const auto one = fictitious_play(2, 1, l2);
  CHECK(one.bracket.lower <= 0.125 + 1e-12);
  CHECK(one.bracket.upper >= 0.125 - 1e-12);
  CHECK(one.bracket.width() < 0.005);

  const auto zero = fictitious_play(2, 0, l2);
  CHECK(std::abs(zero.bracket.midpoint() - 0.5) < 0.01);

  for (int n : {2, 4}) {
    const auto g = fictitious_play(3, n, l2);
    const double exact = static_cast<double>(oracle::l2_minimax(n, 3));
    CHECK(g.bracket.lower <= exact + 1e-12);
    CHECK(g.bracket.upper >= exact - 1e-12);
    CHECK(g.bracket.width() <= 0.05 * exact);
    // Weak duality: every recorded lower end stays below the upper end.
    for (const BracketStep& s : g.history) CHECK(s.lower <= s.upper + 1e-9);
    CHECK(g.bracket.lower >= 0.0);
    CHECK(g.bracket.upper <= 2.0);
  }
}

TEST_CASE("fictitious play, p = 3, small instance") {
  const LossExponent l3(3.0);
  FictitiousPlayConfig cfg;
  cfg.max_iters = 60;
  const auto g = fictitious_play(2, 2, l3, cfg);
  CHECK(g.bracket.lower <= g.bracket.upper + 1e-9);
  CHECK(g.bracket.upper <= 2.0);
  // The returned estimator's exact worst case is the reported upper end.
  const auto w = worst_case_risk(g.estimator, 2, l3, game_search_config(2));
  CHECK(std::abs(w.risk.value - g.bracket.upper) < 1e-12);
}

TEST_CASE("solved family r-table is nonincreasing") {
  const LossExponent l2(2.0);
  FictitiousPlayConfig cfg;
  cfg.max_iters = 200;
  const SolvedFamily fam = solve_family(2, 5, l2, cfg);
  CHECK(fam.rtable.size() == 6);
  for (int n = 1; n <= 5; ++n) {
    CHECK(fam.rtable[n] <= fam.rtable[n - 1] + fam.rtable.widths()[n] + fam.rtable.widths()[n - 1]);
  }
  for (int n = 0; n <= 5; ++n) CHECK(fam.estimator.covers(n));
}
