#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sslab/asymptotics.hpp"
#include "sslab/combinatorics.hpp"
#include "sslab/risk.hpp"
#include "sslab/rng.hpp"

using namespace sslab;

namespace {

const LossExponent l2(2.0);

std::vector<double> random_simplex(CounterRng& rng, std::size_t k) {
  std::vector<double> v(k);
  double s = 0;
  for (double& x : v) s += (x = -std::log(1.0 - rng.uniform01()));
  for (double& x : v) x /= s;
  return v;
}

oracle::Vec widen(const std::vector<double>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("exact univariate risk examples") {
  const auto m = UnivariateEstimator::mle(2);
  CHECK(std::abs(exact_risk_univariate(m, Pmf({0.5, 0.5}), 2, l2).value - 0.25) < 1e-15);
  CHECK(exact_risk_univariate(m, Pmf::point_mass(2, 0), 0, l2).value == doctest::Approx(0.5));
  const auto r = exact_risk_univariate(UnivariateEstimator::mle(3), Pmf::uniform(3), 4, l2);
  CHECK(r.method == RiskMethod::exact);
  CHECK(r.lower == r.value);
  CHECK(r.upper == r.value);
  CHECK(r.meta.n == 4);
}

TEST_CASE("exact univariate risk matches the brute-force oracle") {
  CounterRng rng(derive_stream_key(3, 0));
  for (double p : {2.0, 2.5, 3.0, 4.0}) {
    const LossExponent loss(p);
    for (std::size_t k : {2u, 3u, 4u}) {
      for (int n : {0, 1, 3, 6}) {
        const auto p_true = random_simplex(rng, k);
        const auto ac = UnivariateEstimator::add_constant_l2(k);
        const auto mine = exact_risk_univariate(ac, Pmf(p_true), n, loss).value;
        const auto ref = oracle::univariate_risk(oracle::add_constant, widen(p_true), n, p);
        CHECK(std::abs(mine - static_cast<double>(ref)) < 1e-13);
      }
    }
  }
}

TEST_CASE("mle l2 identity") {
  CounterRng rng(derive_stream_key(4, 0));
  for (std::size_t k : {2u, 3u, 5u}) {
    const auto est = UnivariateEstimator::mle(k);
    for (int n = 1; n <= 8; ++n) {
      UnivariateRiskEvaluator eval(est, n, l2);
      for (int t = 0; t < 10; ++t) {
        const auto p = random_simplex(rng, k);
        double s2 = 0;
        for (double v : p) s2 += v * v;
        CHECK(std::abs(eval(p) - (1 - s2) / n) < 1e-12);
      }
    }
  }
}

TEST_CASE("enumeration cap") {
  const auto est = UnivariateEstimator::mle(10);
  try {
    exact_risk_univariate(est, Pmf::uniform(10), 30, l2, 1000);
    FAIL("expected CapExceeded");
  } catch (const CapExceeded& e) {
    CHECK(e.required() == composition_count(30, 10));
    CHECK(e.cap() == 1000);
  }
}

TEST_CASE("exact joint risk matches the brute-force oracle") {
  CounterRng rng(derive_stream_key(5, 0));
  for (double p : {2.0, 3.0}) {
    const LossExponent loss(p);
    for (auto [kx, ky, m, n] : {std::tuple{2u, 2u, 2, 2}, std::tuple{2u, 3u, 3, 1},
                                std::tuple{3u, 2u, 1, 4}, std::tuple{2u, 2u, 0, 3}}) {
      const auto pxy = random_simplex(rng, kx * ky);
      const auto base = UnivariateEstimator::add_constant_l2(ky);
      const double mine = exact_risk_joint(base, JointPmf(kx, ky, pxy), m, n, loss).value;
      const auto ref = oracle::joint_risk(oracle::add_constant, widen(pxy), kx, ky, m, n, p);
      CHECK(std::abs(mine - static_cast<double>(ref)) < 1e-13);

      const double km = exact_risk_known_marginal(base, JointPmf(kx, ky, pxy), m, loss).value;
      const auto kref = oracle::known_marginal_risk(oracle::add_constant, widen(pxy), kx, ky, m, p);
      CHECK(std::abs(km - static_cast<double>(kref)) < 1e-13);
    }
  }
}

TEST_CASE("joint risk examples") {
  const auto m = UnivariateEstimator::mle(2);
  CHECK(exact_risk_joint(m, JointPmf(2, 2, {0, 0, 1, 0}), 1, 0, l2).value < 1e-15);
  CHECK_THROWS_AS(exact_risk_joint(m, JointPmf::uniform(2, 2), 0, 0, l2), EmptySample);

  // Nonincreasing in n at the product-uniform distribution.
  const auto ac = UnivariateEstimator::add_constant_l2(2);
  double prev = 2.0;
  for (int n : {0, 2, 4, 8}) {
    const double r = exact_risk_joint(ac, JointPmf::uniform(2, 2), 2, n, l2).value;
    CHECK(r <= prev + 1e-15);
    prev = r;
  }
}

TEST_CASE("monte carlo agrees with enumeration") {
  const auto m = UnivariateEstimator::mle(2);
  const auto exact = exact_risk_univariate(m, Pmf::uniform(2), 5, l2).value;
  const auto mc = mc_risk_univariate(m, Pmf::uniform(2), 5, l2, 20000, 1);
  CHECK(mc.method == RiskMethod::monte_carlo);
  CHECK(std::abs(mc.value - exact) <= 1.5 * mc.half_width);  // 1.5 * 1.96 sigma ≈ 3 sigma

  const auto ac = UnivariateEstimator::add_constant_l2(2);
  const auto jx = exact_risk_joint(ac, JointPmf::uniform(2, 2), 2, 2, l2).value;
  const auto jm = mc_risk_joint(ac, JointPmf::uniform(2, 2), 2, 2, l2, 1000000, 2);
  CHECK(std::abs(jm.value - jx) <= 1.5 * jm.half_width);

  const auto zero = mc_risk_univariate(m, Pmf::point_mass(2, 1), 7, l2, 500, 3);
  CHECK(zero.value == 0.0);
  CHECK(zero.half_width == 0.0);
  CHECK_THROWS_AS(mc_risk_univariate(m, Pmf::uniform(2), 5, l2, 99, 1), InvalidArgument);
}

TEST_CASE("monte carlo is deterministic and its interval shrinks like sqrt(2)") {
  const auto ac = UnivariateEstimator::add_constant_l2(3);
  const Pmf p({0.2, 0.3, 0.5});
  const auto a = mc_risk_univariate(ac, p, 6, l2, 50000, 9);
  const auto b = mc_risk_univariate(ac, p, 6, l2, 50000, 9);
  CHECK(a.value == b.value);
  CHECK(a.half_width == b.half_width);
  const auto c = mc_risk_univariate(ac, p, 6, l2, 100000, 9);
  CHECK(a.half_width / c.half_width == doctest::Approx(std::sqrt(2.0)).epsilon(0.05));
}

TEST_CASE("worst-case search examples") {
  const auto m3 = UnivariateEstimator::mle(3);
  const auto w = worst_case_risk(m3, 10, l2);
  const auto& arg = std::get<Pmf>(w.argmax);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(arg[i] - 1.0 / 3) < 1e-3);
  CHECK(std::abs(w.risk.value - (2.0 / 3) / 10) < 1e-9);

  const auto ac = UnivariateEstimator::add_constant_l2(2);
  CHECK(std::abs(worst_case_risk(ac, 4, l2).risk.value - 0.5 / 9) < 1e-12);

  const auto fixed = UnivariateEstimator::fixed(Pmf({0.7, 0.2, 0.1}));
  const auto fw = worst_case_risk(fixed, 3, l2);
  const auto& fa = std::get<Pmf>(fw.argmax);
  CHECK(std::abs(fa[2] - 1.0) < 1e-9);

  for (std::size_t i = 1; i < w.trace.size(); ++i) {
    CHECK(w.trace[i].objective >= w.trace[i - 1].objective);
  }
  const auto again = worst_case_risk(m3, 10, l2);
  CHECK(again.risk.value == w.risk.value);
}

TEST_CASE("worst-case joint search agrees with a grid oracle") {
  // Grid of p_XY on Δ_4 with step 1/10, evaluated by the brute-force oracle.
  const auto ac = UnivariateEstimator::add_constant_l2(2);
  const auto w = worst_case_risk_joint(ac, 2, 2, 3, l2);
  oracle::ld best = 0;
  oracle::compositions(10, 4, [&](const std::vector<int>& c) {
    const oracle::Vec p{c[0] / 10.0L, c[1] / 10.0L, c[2] / 10.0L, c[3] / 10.0L};
    best = std::max(best, oracle::joint_risk(oracle::add_constant, p, 2, 2, 2, 3, 2));
  });
  CHECK(w.risk.value >= static_cast<double>(best) - 1e-12);
  CHECK(w.risk.value <= static_cast<double>(best) * 1.05);
}

TEST_CASE("rbar objective") {
  const std::vector<double> r{0.5, 0.125, 1.0 / 18};
  CHECK(std::abs(rbar_objective(Pmf::point_mass(2, 1), r, l2) - r[2]) < 1e-15);
  const double ref = static_cast<double>(2 * oracle::h_direct(0.5L, 2, 2, r));
  CHECK(std::abs(rbar_objective(Pmf::uniform(2), r, l2) - ref) < 1e-15);
  CHECK(rbar_objective(Pmf::uniform(2), r, l2) == doctest::Approx(0.100694).epsilon(1e-5));
  CHECK(std::abs(rbar_objective(Pmf({0.0, 1.0, 0.0}), r, l2) - r[2]) < 1e-15);
  CHECK_THROWS_AS(rbar_objective(Pmf::uniform(2), std::vector<double>{0.5, 2.5}, l2),
                  InvalidArgument);
}

TEST_CASE("rbar maximize dominates uniform and matches a 1-D grid oracle") {
  for (int m : {2, 5, 8, 12}) {
    const RTable r = exact_l2_rtable(m, 2);
    const std::vector<double> rv(r.values().begin(), r.values().end());
    const auto w = rbar_maximize(2, l2, rv);
    CHECK(w.risk.value >= rbar_objective(Pmf::uniform(2), rv, l2));
    const auto g = oracle::grid_max_1d(
        [&](oracle::ld q) { return oracle::h_direct(q, m, 2, rv) + oracle::h_direct(1 - q, m, 2, rv); },
        20000);
    CHECK(std::abs(w.risk.value - static_cast<double>(g.value)) < 1e-8);
  }
}

TEST_CASE("rmp bracket") {
  const auto r = RiskEstimate::exact(0.05, {2.0, 4, 0, 2, 0});
  const auto b = rmp_bracket(r, 3);
  CHECK(b.method == RiskMethod::bracket);
  CHECK(b.lower == doctest::Approx(0.05));
  CHECK(b.upper == doctest::Approx(0.15));
  CHECK(b.lower <= b.value);
  CHECK(b.value <= b.upper);
  const auto d = rmp_bracket(r, 1);
  CHECK(d.lower == d.upper);

  // Composition estimator with many unlabeled samples sits in the bracket.
  const int m = 2;
  const auto ac = UnivariateEstimator::add_constant_l2(2);
  const auto rm = RiskEstimate::exact(static_cast<double>(oracle::l2_minimax(m, 2)), {2.0, m, 0, 2, 0});
  const auto br = rmp_bracket(rm, 2);
  const double w = worst_case_risk_joint(ac, 2, m, 20 * m, l2).risk.value;
  CHECK(w >= br.lower);
  CHECK(w <= br.upper);
}

TEST_CASE("risk estimate constructors") {
  CHECK_THROWS_AS(RiskEstimate::bracket(0.3, 0.2, {}), InvalidArgument);
  const auto mc = RiskEstimate::monte_carlo(0.1, 0.01, {});
  CHECK(mc.lower == doctest::Approx(0.09));
  CHECK(mc.upper == doctest::Approx(0.11));
  CHECK(to_string(RiskMethod::bracket) != to_string(RiskMethod::exact));
}
