// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.
// Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "rbmp/config.hpp"
#include "rbmp/experiments.hpp"
#include "rbmp/homogeneous.hpp"
#include "rbmp/oracle.hpp"
#include "rbmp/random.hpp"
#include "rbmp/specfun.hpp"

using namespace rbmp;

namespace {

struct Outcome {
  bool passed = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) passed = false;
    notes.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
  void absorb(const std::vector<Check>& checks) {
    for (const auto& c : checks) require(c.passed, c.name + (c.detail.empty() ? "" : ": " + c.detail));
  }
};

std::string num(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// ---------------------------------------------------------------------------

ScalingResult g_scaling;

Outcome scaling_reproduction() {
  g_scaling = run_scaling(default_experiment(ExperimentKind::scaling));
  Outcome o;
  std::vector<Check> checks = scaling_checks(g_scaling);
  checks.erase(std::remove_if(checks.begin(), checks.end(),
                              [](const Check& c) { return c.name.find("V=50") != std::string::npos; }),
               checks.end());
  o.absorb(checks);
  return o;
}

Outcome convergence_property() {
  Outcome o;
  const SpaceSpec plane{2, 2.0};
  const double e20 = expected_distance_scaled({2.0, 6.0, 1.0, 20.0}, plane);
  const double e50 = expected_distance_scaled({2.0, 6.0, 1.0, 50.0}, plane);
  const double rel = std::fabs(e50 - e20) / e50;
  o.require(rel < 0.02, "analytic relative difference " + num(rel) + " < 0.02");
  const ScalingRow *a = nullptr, *b = nullptr;
  for (const auto& r : g_scaling.rows) {
    if (r.dim != 2 || std::fabs(r.ratio - 3.0) > 1e-9) continue;
    if (r.volume == 20.0) a = &r;
    if (r.volume == 50.0) b = &r;
  }
  if (!a || !b) {
    o.require(false, "scaling rows for V=20 and V=50 present");
    return o;
  }
  const double se = std::sqrt(a->sim_std * a->sim_std / a->samples + b->sim_std * b->sim_std / b->samples);
  const double z = std::fabs(a->sim_mean - b->sim_mean) / se;
  o.require(z < 3.0, "MC means " + num(a->sim_mean) + " and " + num(b->sim_mean) + " differ by " + num(z, 2) +
                         " standard errors < 3");
  return o;
}

Outcome radius_reproduction() {
  Outcome o;
  std::vector<Check> checks = radius_checks(run_radius(default_experiment(ExperimentKind::radius)));
  checks.erase(std::remove_if(checks.begin(), checks.end(),
                              [](const Check& c) { return c.name.find("0.55") != std::string::npos; }),
               checks.end());
  o.absorb(checks);
  return o;
}

Outcome hetero_reproduction() {
  Outcome o;
  o.absorb(hetero_checks(run_hetero(default_experiment(ExperimentKind::heterogeneous))));
  return o;
}

Outcome oracle_exactness() {
  Outcome o;
  Rng rng(20240501);
  const SpaceSpec plane{2, 2.0};
  int discrepancies = 0;
  for (int t = 0; t < 500; ++t) {
    const int m = static_cast<int>(rng.uniform01() * 8);
    const int n = static_cast<int>(rng.uniform01() * 8);
    const double limit = rng.uniform01() < 0.25 ? kNoRadiusLimit : rng.uniform(0.05, 1.2);
    const MatchingInstance inst = with_radius_limit(sample_hyperball(m, n, plane, 1.0, rng.next()), limit);
    std::vector<std::vector<double>> dist(m, std::vector<double>(n));
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) {
        const double x = lp_distance(inst.demand_points[i].coords, inst.supply_points[j], 2.0);
        dist[i][j] = x <= limit ? x : -1.0;
      }
    }
    const auto best = oracle::best_matching_bruteforce(dist);
    const MatchingSolution sol = solve_matching(inst);
    if (sol.matched_count != best.first || std::fabs(sol.total_distance - best.second) > 1e-9) ++discrepancies;
  }
  o.require(discrepancies == 0, std::to_string(discrepancies) + " discrepancies in 500 instances");
  return o;
}

// ---------------------------------------------------------------------------

std::vector<ScenarioConfig> g_cfg;
std::vector<FbsmResult> g_res;

void solve_scenarios() {
  for (int s = 1; s <= 3; ++s) {
    g_cfg.push_back(builtin_scenario(s));
    g_res.push_back(fbsm_solve(g_cfg.back()));
  }
}

Outcome scenario(int id) {
  Outcome o;
  o.absorb(dynamic_checks(id, g_cfg[id - 1], g_res[id - 1]));
  return o;
}

Outcome pmp_stationarity() {
  Outcome o;
  for (int s = 0; s < 3; ++s) {
    const ScenarioConfig& cfg = g_cfg[s];
    const FbsmResult& res = g_res[s];
    Rng rng(900 + s);
    const int zones = cfg.zone_count();
    int violations = 0;
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const std::size_t j = static_cast<std::size_t>(rng.uniform01() * res.times.size());
      const double t = res.times[j];
      const State& x = res.states[j];
      const Costate& phi = res.costates[j];
      const Control& u = res.controls[j];
      const double h = hamiltonian(x, u, phi, t, cfg);
      const double lo = cfg.tau_min(t), hi = cfg.horizon;
      auto admissible = [&](Control v) {
        v.tau = std::clamp(v.tau, lo, hi);
        for (double& r : v.radius) r = std::clamp(r, 0.0, 1.0);
        return v;
      };
      // Search tolerance: change of H under moves of the size the minimiser resolves (1e-3).
      double tol = 1e-9;
      for (int c = 0; c <= zones; ++c) {
        for (double sgn : {-1.0, 1.0}) {
          Control v = u;
          if (c == zones) {
            v.tau *= 1.0 + sgn * 1e-3;
          } else {
            v.radius[c] += sgn * 1e-3;
          }
          tol += std::fabs(hamiltonian(x, admissible(v), phi, t, cfg) - h) / 2.0;
        }
      }
      for (int trial = 0; trial < 16; ++trial) {
        Control v = u;
        v.tau *= 1.0 + (rng.uniform01() < 0.5 ? -0.05 : 0.05);
        for (double& r : v.radius) r += rng.uniform01() < 0.5 ? -0.02 : 0.02;
        const double drop = h - hamiltonian(x, admissible(v), phi, t, cfg);
        if (drop > tol) {
          ++violations;
          worst = std::max(worst, drop - tol);
        }
      }
    }
    o.require(violations == 0, "scenario " + std::to_string(s + 1) + ": " + std::to_string(violations) +
                                   " of 320 perturbations lower H beyond tolerance (worst excess " +
                                   num(worst, 6) + ")");
  }
  return o;
}

Outcome kernel_suite() {
  Outcome o;

  bool increasing = true;
  for (double s : {-1.0, -0.5, -1.0 / 3.0, -0.25}) {
    auto g = [s](double x) { return (1.0 / x - 1.0) * polylog_neg(s, x); };
    for (int i = 1; i <= 200; ++i) {
      const double x = i / 201.0;
      increasing = increasing && g(x + 1e-4) - g(x) > 0.0;
    }
  }
  o.require(increasing, "(1/x - 1) Li_s(x) increasing on 200 points for s in {-1, -1/2, -1/3, -1/4}");

  double worst_sum = 0.0;
  for (int m = 1; m <= 200; ++m) {
    for (int n = m; n <= 200; n += (m < 20 ? 1 : 7)) {
      const auto pk = match_rank_distribution(m, n);
      double sum = 0.0;
      for (double p : pk) sum += p;
      worst_sum = std::max(worst_sum, std::fabs(sum - 1.0));
    }
  }
  o.require(worst_sum <= 1e-9, "rank probabilities sum to 1 (worst deviation " + std::to_string(worst_sum) + ")");

  const std::vector<LocalProfile> profiles = {{10, 10, 1, 1}, {10, 15, 0.7, 1}, {2, 6, 1, 10}, {5, 20, 0.3, 2}};
  bool cdf_ok = true, r_ok = true;
  for (const SpaceSpec space : {SpaceSpec{2, 2.0}, SpaceSpec{3, 2.0}}) {
    for (LocalProfile prof : profiles) {
      const double rv = ball_radius(space, prof.volume);
      double prev = -1.0;
      for (int i = 0; i < 100; ++i) {
        const double f = matching_distance_cdf(rv * i / 99.0, prof, space);
        cdf_ok = cdf_ok && f >= prev - 1e-12;
        prev = f;
      }
      double pp = 0.0, pd = 0.0;
      for (int i = 1; i <= 50; ++i) {
        prof.radius = i / 50.0;
        const double p = match_probability(prof, space), d = truncated_distance(prof, space);
        r_ok = r_ok && p >= pp - 1e-12 && d >= pd - 1e-12;
        pp = p;
        pd = d;
      }
    }
  }
  o.require(cdf_ok, "distance CDF nondecreasing on 100-point grids");
  o.require(r_ok, "p and d nondecreasing in r on 50-point grids");

  bool sandwich = true;
  for (int dim : {1, 2, 3}) {
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
      for (double q : {1.2, 1.5, 2.0, 3.0, 5.0}) {
        for (double v : {1.0, 5.0, 10.0, 20.0}) {
          const LocalProfile prof{m, q * m, 1.0, v};
          if (prof.supply_count() <= prof.demand_count()) continue;
          const SpaceSpec space{dim, 2.0};
          const double e = expected_distance_polylog(prof, space);
          const DistanceBounds b = distance_bounds(prof, space);
          sandwich = sandwich && b.lower <= e * (1 + 1e-9) && e <= b.upper * (1 + 1e-9);
        }
      }
    }
  }
  o.require(sandwich, "integral bounds sandwich the polylogarithm approximation");

  // Step halving away from lattice nodes, where both stencils see the same cell.
  const SpaceSpec plane{2, 2.0};
  const std::vector<std::pair<double, double>> states = {{4.5, 7.3}, {2.3, 6.6}, {9.4, 12.7}, {15.5, 25.5}};
  double worst_fd = 0.0;
  auto close = [&](double a, double b) {
    const double scale = std::max(std::fabs(a), std::fabs(b));
    const double rel = scale > 1e-9 ? std::fabs(a - b) / scale : 0.0;
    worst_fd = std::max(worst_fd, rel);
    return rel <= 0.05;
  };
  bool fd_ok = true;
  for (const auto& [m, n] : states) {
    for (double r : {0.3, 0.6, 1.0}) {
      const PDJacobian a = pd_jacobian(m, n, r, 1.0, plane, 0.05), b = pd_jacobian(m, n, r, 1.0, plane, 0.025);
      fd_ok = close(a.p_m, b.p_m) && fd_ok;
      fd_ok = close(a.p_n, b.p_n) && fd_ok;
      fd_ok = close(a.d_m, b.d_m) && fd_ok;
      fd_ok = close(a.d_n, b.d_n) && fd_ok;
    }
  }
  ScenarioConfig coarse = builtin_scenario(2), fine = builtin_scenario(2);
  fine.fbsm.fd_step = 0.025;
  const State x{{4.5, 2.3, 9.4, 15.5}, {7.3, 6.6, 12.7, 25.5}};
  const Costate phi{{0.4, -0.2, 0.7, 0.1}, {-0.3, 0.5, 0.2, -0.6}};
  const Control u{0.6, {0.3, 0.6, 0.8, 1.0}};
  const Costate ca = costate_derivative(x, u, phi, 0.0, coarse), cb = costate_derivative(x, u, phi, 0.0, fine);
  for (int z = 0; z < 4; ++z) {
    fd_ok = close(ca.m[z], cb.m[z]) && fd_ok;
    fd_ok = close(ca.n[z], cb.n[z]) && fd_ok;
  }
  o.require(fd_ok, "finite differences agree under step halving (worst relative gap " + num(worst_fd) + ")");

  for (int s = 1; s <= 3; ++s) {
    ScenarioConfig half = builtin_scenario(s);
    half.dt /= 2.0;
    const double a = g_res[s - 1].objective, b = fbsm_solve(half).objective;
    const double rel = std::fabs(a - b) / std::fabs(b);
    o.require(rel < 0.01, "scenario " + std::to_string(s) + " objective " + num(a) + " vs " + num(b) +
                              " at half step, change " + num(rel) + " < 0.01");
  }
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "scaling reproduction", scaling_reproduction},
      {2, "convergence property", convergence_property},
      {3, "radius reproduction", radius_reproduction},
      {4, "heterogeneous reproduction", hetero_reproduction},
      {5, "oracle exactness", oracle_exactness},
      {6, "control scenario 1", [] {
         solve_scenarios();
         return scenario(1);
       }},
      {7, "control scenario 2", [] { return scenario(2); }},
      {8, "control scenario 3", [] { return scenario(3); }},
      {9, "PMP stationarity", pmp_stationarity},
      {10, "numerical kernel suite", kernel_suite},
  };
  int failed = 0;
  std::vector<std::string> lines;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    const Outcome o = c.run();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (const auto& n : o.notes) std::printf("    [%d] %s\n", c.id, n.c_str());
    char line[256];
    std::snprintf(line, sizeof line, "criterion %2d %s: %s (%.1fs)", c.id, o.passed ? "PASS" : "FAIL", c.name, secs);
    std::printf("%s\n", line);
    std::fflush(stdout);
    lines.emplace_back(line);
    failed += o.passed ? 0 : 1;
  }
  std::printf("\nsummary\n");
  for (const auto& l : lines) std::printf("%s\n", l.c_str());
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
