#include <doctest.h>

#include <cmath>

#include "rbmp/control.hpp"
#include "rbmp/homogeneous.hpp"

using namespace rbmp;

namespace {

const SpaceSpec kPlane{2, 2.0};

ScenarioConfig single_zone(double lambda, double mu) {
  ScenarioConfig cfg;
  ZoneGeometry g;
  g.zone_id = 1;
  g.center = {0.0, 0.0};
  g.shape = ZoneShape::ball;
  cfg.zones = {g};
  cfg.initial_m = {10};
  cfg.initial_n = {20};
  cfg.demand_rate = RateFunction::constant(lambda);
  cfg.supply_rate = RateFunction::constant(mu);
  return cfg;
}

State state(std::vector<double> m, std::vector<double> n) { return {std::move(m), std::move(n)}; }

}  // namespace

TEST_CASE("pd_continuous at lattice points") {
  for (int m : {1, 3, 7}) {
    for (int n : {m, m + 2, 3 * m}) {
      for (double r : {0.3, 0.7, 1.0}) {
        const LocalProfile prof{double(m), double(n), r, 1.0};
        const MatchPD pd = pd_continuous(m, n, r, 1.0, kPlane);
        CHECK(pd.p == doctest::Approx(match_probability(prof, kPlane)).epsilon(1e-12));
        CHECK(pd.d == doctest::Approx(truncated_distance(prof, kPlane)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("pd_continuous interpolation") {
  for (double m : {0.4, 1.7, 4.5, 12.3}) {
    CHECK(pd_continuous(m, 2.2 * m, 1.0, 1.0, kPlane).p == doctest::Approx(1.0));
  }
  const MatchPD mid = pd_continuous(3.5, 7.2, 0.7, 1.0, kPlane);
  double lo_p = 1, hi_p = 0, lo_d = 1e9, hi_d = 0;
  for (int m : {3, 4}) {
    for (int n : {7, 8}) {
      const MatchPD c = pd_continuous(m, n, 0.7, 1.0, kPlane);
      lo_p = std::min(lo_p, c.p);
      hi_p = std::max(hi_p, c.p);
      lo_d = std::min(lo_d, c.d);
      hi_d = std::max(hi_d, c.d);
    }
  }
  CHECK(mid.p >= lo_p);
  CHECK(mid.p <= hi_p);
  CHECK(mid.d >= lo_d);
  CHECK(mid.d <= hi_d);
  CHECK_THROWS(pd_continuous(5.0, 4.0, 0.5, 1.0, kPlane));
  CHECK(pd_continuous(3.0, 3.0, 0.0, 1.0, kPlane).p == 0.0);
}

TEST_CASE("cost rate and step cost") {
  const ScenarioConfig cfg = single_zone(10, 20);
  const State x = state({10}, {20});
  const Control u{0.5, {1.0}};
  const double d = pd_continuous(10, 20, 1.0, 1.0, kPlane).d;
  CHECK(cost_rate(x, u, 0.0, cfg) == doctest::Approx(10 * d / 0.5 + 10 * 0.5 / 2));
  CHECK(step_cost(x, u, 0.0, cfg) == doctest::Approx(cost_rate(x, u, 0.0, cfg) * 0.5));

  // Nothing matched: only waiting terms remain.
  const Control none{0.1, {0.0}};
  CHECK(step_cost(x, none, 0.0, cfg) == doctest::Approx(10 * 0.01 / 2 + 10 * 0.1));
  CHECK(cost_rate(x, none, 0.0, cfg) == doctest::Approx(10 * 0.1 / 2 + 10));

  // The arrival-waiting term is linear in tau.
  const Control u2{1.0, {1.0}};
  const double waiting1 = cost_rate(x, u, 0.0, cfg) - 10 * d / 0.5;
  const double waiting2 = cost_rate(x, u2, 0.0, cfg) - 10 * d / 1.0;
  CHECK(waiting2 == doctest::Approx(2.0 * waiting1));
}

TEST_CASE("state derivative") {
  const ScenarioConfig cfg = builtin_scenario(2);
  const State x = state({3, 5, 10, 20}, {3, 5, 10, 20});
  const auto none = state_derivative(x, Control{0.5, {0, 0, 0, 0}}, 0.0, cfg);
  for (int z = 0; z < 4; ++z) {
    CHECK(none.m[z] == 2.0);
    CHECK(none.n[z] == 4.0);
  }
  const auto full = state_derivative(x, Control{0.5, {1, 1, 1, 1}}, 0.0, cfg);
  for (int z = 0; z < 4; ++z) {
    CHECK(full.m[z] == doctest::Approx(2.0 - x.m[z] / 0.5));
    CHECK(full.n[z] - full.m[z] == doctest::Approx(2.0));
  }
  const auto steady = state_derivative(state({1, 1, 1, 1}, {1, 1, 1, 1}), Control{0.5, {1, 1, 1, 1}}, 0.0,
                                       builtin_scenario(1));
  for (double v : steady.m) CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("terminal penalty") {
  const ScenarioConfig cfg = builtin_scenario(1);
  CHECK(terminal_penalty(state({0, 0, 0, 0}, {0, 0, 0, 0}), cfg) == 0.0);
  CHECK(terminal_penalty(state({3, 5, 10, 20}, {3, 5, 10, 20}), cfg) == doctest::Approx(76.0));
  const Costate g = terminal_penalty_gradient(cfg);
  for (int z = 0; z < 4; ++z) {
    CHECK(g.m[z] == 1.0);
    CHECK(g.n[z] == 1.0);
  }
}

TEST_CASE("hamiltonian structure") {
  const ScenarioConfig cfg = builtin_scenario(3);
  const State x = state({3, 5, 10, 20}, {4, 6, 12, 25});
  const Control u{0.4, {0.6, 0.7, 0.8, 0.9}};
  const Costate zero = state({0, 0, 0, 0}, {0, 0, 0, 0});
  CHECK(hamiltonian(x, u, zero, 1.0, cfg) == doctest::Approx(cost_rate(x, u, 1.0, cfg)));
  const Costate a = state({0.1, -0.2, 0.3, 0.4}, {0.5, 0.1, -0.3, 0.2});
  Costate a3 = a;
  for (auto& v : a3.m) v *= 3;
  for (auto& v : a3.n) v *= 3;
  const double h0 = hamiltonian(x, u, zero, 1.0, cfg);
  CHECK(hamiltonian(x, u, a3, 1.0, cfg) - h0 == doctest::Approx(3.0 * (hamiltonian(x, u, a, 1.0, cfg) - h0)));
}

TEST_CASE("costate derivative") {
  const ScenarioConfig cfg = builtin_scenario(3);
  SUBCASE("full radius freezes p") {
    const PDJacobian j = pd_jacobian(4.5, 7.3, 1.0, 1.0, kPlane, 0.05);
    CHECK(j.p_m == doctest::Approx(0.0));
    CHECK(j.p_n == doctest::Approx(0.0));
  }
  SUBCASE("step halving") {
    for (double r : {0.4, 0.7, 0.9}) {
      const PDJacobian a = pd_jacobian(4.5, 7.3, r, 1.0, kPlane, 0.05);
      const PDJacobian b = pd_jacobian(4.5, 7.3, r, 1.0, kPlane, 0.025);
      CHECK(a.p_m == doctest::Approx(b.p_m).epsilon(0.05));
      CHECK(a.p_n == doctest::Approx(b.p_n).epsilon(0.05));
      CHECK(a.d_m == doctest::Approx(b.d_m).epsilon(0.05));
      CHECK(a.d_n == doctest::Approx(b.d_n).epsilon(0.05));
    }
  }
  SUBCASE("zones are decoupled") {
    const State x = state({3.2, 5.4, 10.1, 20.6}, {4.1, 6.3, 12.2, 25.7});
    const Control u{0.4, {0.6, 0.7, 0.8, 0.9}};
    const Costate phi = state({0.1, 0.2, 0.3, 0.4}, {0.5, 0.1, 0.3, 0.2});
    State y = x;
    y.m[1] += 1.3;
    y.n[1] += 2.0;
    const Costate a = costate_derivative(x, u, phi, 1.0, cfg);
    const Costate b = costate_derivative(y, u, phi, 1.0, cfg);
    for (int z : {0, 2, 3}) {
      CHECK(a.m[z] == b.m[z]);
      CHECK(a.n[z] == b.n[z]);
    }
  }
  SUBCASE("matches a finite difference of the Hamiltonian") {
    // Inside one lattice cell p and d are linear in the state, so H is a cubic
    // there and the central difference is accurate to O(h^2).
    const State x = state({3.4, 5.5, 10.3, 20.6}, {4.4, 6.7, 12.2, 25.4});
    const Control u{0.4, {0.6, 0.7, 0.8, 0.9}};
    const Costate phi = state({0.1, 0.2, 0.3, 0.4}, {0.5, 0.1, 0.3, 0.2});
    const Costate dphi = costate_derivative(x, u, phi, 1.0, cfg);
    const double h = 0.05;
    for (int z = 0; z < 4; ++z) {
      State xp = x, xm = x;
      xp.m[z] += h;
      xm.m[z] -= h;
      CHECK(-dphi.m[z] == doctest::Approx((hamiltonian(xp, u, phi, 1.0, cfg) - hamiltonian(xm, u, phi, 1.0, cfg)) /
                                          (2 * h)).epsilon(1e-4));
      xp = x;
      xm = x;
      xp.n[z] += h;
      xm.n[z] -= h;
      CHECK(-dphi.n[z] == doctest::Approx((hamiltonian(xp, u, phi, 1.0, cfg) - hamiltonian(xm, u, phi, 1.0, cfg)) /
                                          (2 * h)).epsilon(1e-4));
    }
  }
}

TEST_CASE("minimize hamiltonian") {
  SUBCASE("stationary balanced zones") {
    const ScenarioConfig cfg = builtin_scenario(1);
    const State x = state({1, 1, 1, 1}, {1, 1, 1, 1});
    const Costate phi = state({0.15, 0.15, 0.15, 0.15}, {0.15, 0.15, 0.15, 0.15});
    const Control u = minimize_hamiltonian(x, phi, 2.0, cfg);
    CHECK(u.tau == doctest::Approx(0.5));
    for (double r : u.radius) CHECK(r == 1.0);
  }
  SUBCASE("more supply shortens the interval") {
    const ScenarioConfig cfg = single_zone(10, 20);
    const Costate phi = state({0}, {0});
    const Control bal = minimize_hamiltonian(state({10}, {10}), phi, 0.0, cfg);
    const Control rich = minimize_hamiltonian(state({10}, {30}), phi, 0.0, cfg);
    CHECK(rich.tau < bal.tau);
    CHECK(rich.radius[0] <= bal.radius[0]);
  }
  SUBCASE("within bounds and no worse than the grid") {
    const ScenarioConfig cfg = builtin_scenario(3);
    for (double t : {0.0, 1.3, 4.7}) {
      const State x = state({1.2, 2.5, 4.0, 9.0}, {3.0, 4.5, 6.0, 12.0});
      const Costate phi = state({0.05, 0.1, 0.2, -0.1}, {0.1, 0.05, 0.0, 0.2});
      const Control u = minimize_hamiltonian(x, phi, t, cfg);
      CHECK(u.tau >= cfg.tau_min(t) - 1e-12);
      CHECK(u.tau <= cfg.horizon);
      const double h = hamiltonian(x, u, phi, t, cfg);
      for (int k = 0; k <= 10; ++k) {
        const double tau = cfg.tau_min(t) + (cfg.horizon - cfg.tau_min(t)) * k / 10.0;
        for (double r : {0.0, 0.25, 0.5, 0.75, 1.0}) {
          CHECK(h <= hamiltonian(x, Control{tau, {r, r, r, r}}, phi, t, cfg) + 1e-9);
        }
      }
    }
  }
}

TEST_CASE("scenario 1 sweep") {
  const ScenarioConfig cfg = builtin_scenario(1);
  const FbsmResult res = fbsm_solve(cfg);
  CHECK(res.converged);
  CHECK(res.iterations <= 200);
  for (const auto& x : res.states) {
    for (int z = 0; z < 4; ++z) CHECK(x.n[z] - x.m[z] >= -1e-6);
  }
  for (int z = 0; z < 4; ++z) {
    CHECK(res.costates.back().m[z] == 1.0);
    CHECK(res.costates.back().n[z] == 1.0);
  }
  const auto& hist = res.objective_history;
  REQUIRE(hist.size() >= 6);
  for (std::size_t i = hist.size() - 5; i < hist.size(); ++i) CHECK(hist[i] <= hist[i - 1] + 1e-6);
  for (const auto& u : res.controls) {
    CHECK(u.tau == doctest::Approx(0.5).epsilon(0.1));
    for (double r : u.radius) CHECK(r >= 0.95);
  }
}

TEST_CASE("config validation") {
  ScenarioConfig cfg = builtin_scenario(1);
  CHECK_NOTHROW(cfg.validate());
  cfg.dt = 0.03;
  CHECK_THROWS(cfg.validate());
  cfg = builtin_scenario(1);
  cfg.supply_rate = RateFunction::constant(1.0);
  CHECK_THROWS(cfg.validate());
  cfg = builtin_scenario(1);
  cfg.initial_n[0] = 1.0;
  CHECK_THROWS(cfg.validate());
  CHECK_THROWS(builtin_scenario(4));
  const ScenarioConfig s3 = builtin_scenario(3);
  CHECK(s3.lambda(0, 1.0) == 4.0);
  CHECK(s3.mu(3, 2.0) == 4 + 4 + 4.0);
  CHECK(s3.tau_min(0.0) == doctest::Approx(1.0 / 3.0));
}
