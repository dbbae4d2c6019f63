#include "rbmp/control.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "rbmp/homogeneous.hpp"
#include "rbmp/parallel.hpp"

namespace rbmp {

int ScenarioConfig::steps() const { return static_cast<int>(std::llround(horizon / dt)); }

double ScenarioConfig::tau_min(double t) const {
  double lo = 0.0;
  for (int z = 0; z < zone_count(); ++z) lo = std::max(lo, 1.0 / (lambda(z, t) * volume(z)));
  return lo;
}

void ScenarioConfig::validate() const {
  space.validate();
  if (zones.empty()) throw std::domain_error("ScenarioConfig: no zones");
  if (!(horizon > 0.0) || !(dt > 0.0)) throw std::domain_error("ScenarioConfig: horizon and dt must be positive");
  if (std::fabs(steps() * dt - horizon) > 1e-9 * horizon) throw std::domain_error("ScenarioConfig: dt must divide the horizon");
  if (static_cast<int>(initial_m.size()) != zone_count() || static_cast<int>(initial_n.size()) != zone_count()) {
    throw std::domain_error("ScenarioConfig: one initial density per zone required");
  }
  for (int z = 0; z < zone_count(); ++z) {
    zones[z].validate();
    if (!(initial_m[z] >= 0.0) || initial_n[z] < initial_m[z]) {
      throw std::domain_error("ScenarioConfig: initial densities need 0 <= m <= n");
    }
    for (int j = 0; j <= steps(); ++j) {
      const double t = j * dt;
      if (!(lambda(z, t) > 0.0) || mu(z, t) < lambda(z, t)) {
        throw std::domain_error("ScenarioConfig: rates need 0 < lambda <= mu on the horizon");
      }
    }
  }
  if (tau_min(0.0) > horizon) throw std::domain_error("ScenarioConfig: pooling-interval bounds are empty");
  if (!(fbsm.omega > 0.0 && fbsm.omega <= 1.0)) throw std::domain_error("ScenarioConfig: omega must lie in (0, 1]");
  if (fbsm.max_iter < 1 || fbsm.tau_grid < 2 || fbsm.r_grid < 2 || !(fbsm.tol > 0.0) || !(fbsm.fd_step > 0.0) ||
      !(fbsm.r_tol > 0.0)) {
    throw std::domain_error("ScenarioConfig: invalid solver options");
  }
}

ScenarioConfig builtin_scenario(int id) {
  ScenarioConfig cfg;
  for (int z = 1; z <= 4; ++z) {
    ZoneGeometry g;
    g.zone_id = z;
    g.center = {static_cast<double>(z - 1), 0.0};
    g.volume = 1.0;
    g.shape = ZoneShape::ball;
    cfg.zones.push_back(g);
  }
  for (int z = 1; z <= 4; ++z) {
    if (z > 1) cfg.adjacency[z].push_back(z - 1);
    if (z < 4) cfg.adjacency[z].push_back(z + 1);
  }
  cfg.initial_m = {3, 5, 10, 20};
  cfg.initial_n = cfg.initial_m;
  switch (id) {
    case 1:
      cfg.demand_rate = RateFunction::constant(2.0);
      cfg.supply_rate = RateFunction::constant(2.0);
      break;
    case 2:
      cfg.demand_rate = RateFunction::constant(2.0);
      cfg.supply_rate = RateFunction::constant(4.0);
      break;
    case 3:
      cfg.demand_rate = {2.0, 1.0, 1.0};
      cfg.supply_rate = {4.0, 1.0, 2.0};
      break;
    default:
      throw std::domain_error("builtin_scenario: id must be 1, 2 or 3");
  }
  return cfg;
}

MatchPD pd_lattice(double m, double n, double r, double volume, const SpaceSpec& space) {
  if (!(m >= 0.0) || !(n >= 0.0)) throw std::domain_error("pd_continuous: densities must be nonnegative");
  if (!(r >= 0.0 && r <= 1.0)) throw std::domain_error("pd_continuous: radius must lie in [0, 1]");
  const double cm = m * volume;
  const double cn = n * volume;
  const int m_lo = std::max(1, static_cast<int>(std::floor(cm)));
  const int m_hi = std::max(1, static_cast<int>(std::ceil(cm)));
  const int n_lo = std::max(1, static_cast<int>(std::floor(cn)));
  const int n_hi = std::max(1, static_cast<int>(std::ceil(cn)));
  const double wm = cm >= 1.0 ? cm - std::floor(cm) : 0.0;
  const double wn = cn >= 1.0 ? cn - std::floor(cn) : 0.0;
  const double radius_v = ball_radius(space, volume);
  auto corner = [&](int mc, int nc) {
    const TruncatedSums s = truncated_sums(mc, std::max(nc, mc), r, space.dim);
    MatchPD out{s.probability, 0.0};
    if (out.p >= kMinMatchProbability) out.d = radius_v * s.first;
    return out;
  };
  const MatchPD c00 = corner(m_lo, n_lo);
  const MatchPD c01 = n_hi == n_lo ? c00 : corner(m_lo, n_hi);
  const MatchPD c10 = m_hi == m_lo ? c00 : corner(m_hi, n_lo);
  const MatchPD c11 = m_hi == m_lo ? c01 : (n_hi == n_lo ? c10 : corner(m_hi, n_hi));
  auto mix = [&](double a00, double a01, double a10, double a11) {
    return (1 - wm) * ((1 - wn) * a00 + wn * a01) + wm * ((1 - wn) * a10 + wn * a11);
  };
  return {mix(c00.p, c01.p, c10.p, c11.p), mix(c00.d, c01.d, c10.d, c11.d)};
}

MatchPD pd_continuous(double m, double n, double r, double volume, const SpaceSpec& space) {
  if (!(m > 0.0)) throw std::domain_error("pd_continuous: demand density must be positive");
  if (n < m) throw std::domain_error("pd_continuous: supply density below demand density");
  return pd_lattice(m, n, r, volume, space);
}

namespace {

void check_shapes(const State& x, const Control& u, const ScenarioConfig& cfg) {
  const std::size_t z = cfg.zones.size();
  if (x.m.size() != z || x.n.size() != z || u.radius.size() != z) {
    throw std::domain_error("control: state/control sizes do not match the zone count");
  }
  if (!(u.tau > 0.0)) throw std::domain_error("control: pooling interval must be positive");
}

// Matched-distance mass p * d, dropped when nothing is matched.
double matched_mass(const MatchPD& pd) { return pd.p < kMinMatchProbability ? 0.0 : pd.p * pd.d; }

}  // namespace

double cost_rate(const State& x, const Control& u, double t, const ScenarioConfig& cfg) {
  check_shapes(x, u, cfg);
  double total = 0.0;
  for (int z = 0; z < cfg.zone_count(); ++z) {
    const MatchPD pd = pd_lattice(x.m[z], x.n[z], u.radius[z], cfg.volume(z), cfg.space);
    total += x.m[z] * matched_mass(pd) / u.tau + cfg.lambda(z, t) * u.tau / 2.0 + x.m[z] * (1.0 - pd.p);
  }
  return total;
}

double step_cost(const State& x, const Control& u, double t, const ScenarioConfig& cfg) {
  check_shapes(x, u, cfg);
  double total = 0.0;
  for (int z = 0; z < cfg.zone_count(); ++z) {
    const MatchPD pd = pd_lattice(x.m[z], x.n[z], u.radius[z], cfg.volume(z), cfg.space);
    total += x.m[z] * matched_mass(pd) + cfg.lambda(z, t) * u.tau * u.tau / 2.0 + x.m[z] * (1.0 - pd.p) * u.tau;
  }
  return total;
}

State state_derivative(const State& x, const Control& u, double t, const ScenarioConfig& cfg) {
  check_shapes(x, u, cfg);
  State dx{std::vector<double>(cfg.zone_count()), std::vector<double>(cfg.zone_count())};
  for (int z = 0; z < cfg.zone_count(); ++z) {
    const double p = x.m[z] > 0.0 ? pd_lattice(x.m[z], x.n[z], u.radius[z], cfg.volume(z), cfg.space).p : 0.0;
    const double outflow = p * x.m[z] / u.tau;
    dx.m[z] = cfg.lambda(z, t) - outflow;
    dx.n[z] = cfg.mu(z, t) - outflow;
  }
  return dx;
}

double terminal_penalty(const State& x, const ScenarioConfig& cfg) {
  double total = 0.0;
  for (int z = 0; z < cfg.zone_count(); ++z) total += (x.m[z] + x.n[z]) * cfg.volume(z);
  return total;
}

Costate terminal_penalty_gradient(const ScenarioConfig& cfg) {
  Costate g{std::vector<double>(cfg.zone_count()), std::vector<double>(cfg.zone_count())};
  for (int z = 0; z < cfg.zone_count(); ++z) g.m[z] = g.n[z] = cfg.volume(z);
  return g;
}

double hamiltonian(const State& x, const Control& u, const Costate& phi, double t, const ScenarioConfig& cfg) {
  const State f = state_derivative(x, u, t, cfg);
  double h = cost_rate(x, u, t, cfg);
  for (int z = 0; z < cfg.zone_count(); ++z) h += phi.m[z] * f.m[z] + phi.n[z] * f.n[z];
  return h;
}

PDJacobian pd_jacobian(double m, double n, double r, double volume, const SpaceSpec& space, double h) {
  auto diff = [&](double dm, double dn, double step) {
    const MatchPD hi = pd_lattice(m + dm, n + dn, r, volume, space);
    const MatchPD lo = pd_lattice(std::max(0.0, m - dm), std::max(0.0, n - dn), r, volume, space);
    return std::pair<double, double>{(hi.p - lo.p) / step, (hi.d - lo.d) / step};
  };
  const auto [pm, dm] = diff(h, 0.0, m - h >= 0.0 ? 2 * h : m + h);
  const auto [pn, dn] = diff(0.0, h, n - h >= 0.0 ? 2 * h : n + h);
  return {pm, pn, dm, dn};
}

Costate costate_derivative(const State& x, const Control& u, const Costate& phi, double t,
                           const ScenarioConfig& cfg) {
  check_shapes(x, u, cfg);
  (void)t;
  Costate dphi{std::vector<double>(cfg.zone_count()), std::vector<double>(cfg.zone_count())};
  for (int z = 0; z < cfg.zone_count(); ++z) {
    const double m = x.m[z];
    const double v = cfg.volume(z);
    const double r = u.radius[z];
    const MatchPD pd = pd_lattice(m, x.n[z], r, v, cfg.space);
    const PDJacobian j = pd_jacobian(m, x.n[z], r, v, cfg.space, cfg.fbsm.fd_step);
    const bool matched = pd.p >= kMinMatchProbability;
    const double q = matched ? pd.p * pd.d : 0.0;
    const double q_m = matched ? j.p_m * pd.d + pd.p * j.d_m : 0.0;
    const double q_n = matched ? j.p_n * pd.d + pd.p * j.d_n : 0.0;
    const double dl_dm = (q + m * q_m) / u.tau + (1.0 - pd.p) - m * j.p_m;
    const double dl_dn = m * q_n / u.tau - m * j.p_n;
    const double df_dm = -(pd.p + m * j.p_m) / u.tau;
    const double df_dn = -m * j.p_n / u.tau;
    const double big_phi = phi.m[z] + phi.n[z];
    dphi.m[z] = -(dl_dm + big_phi * df_dm);
    dphi.n[z] = -(dl_dn + big_phi * df_dn);
  }
  return dphi;
}

namespace {

// r-dependent part of one zone's Hamiltonian times tau / m:
// q(r) - p(r) (Phi + tau), with q = p d.
struct ZoneObjective {
  double m, n, volume, big_phi;
  const SpaceSpec* space;

  std::pair<double, double> pq(double r) const {
    const MatchPD pd = pd_lattice(m, n, r, volume, *space);
    return {pd.p, matched_mass(pd)};
  }
};

double golden_min(const std::function<double(double)>& f, double a, double b, double tol, double& fx) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  if (fc <= fd) {
    fx = fc;
    return c;
  }
  fx = fd;
  return d;
}

}  // namespace

Control minimize_hamiltonian(const State& x, const Costate& phi, double t, const ScenarioConfig& cfg) {
  const int zc = cfg.zone_count();
  const FbsmOptions& opt = cfg.fbsm;
  const double tau_lo = cfg.tau_min(t);
  const double tau_hi = cfg.horizon;
  double rate_sum = 0.0;
  for (int z = 0; z < zc; ++z) rate_sum += cfg.lambda(z, t);
  const double a_coef = rate_sum / 2.0;

  std::vector<ZoneObjective> obj;
  std::vector<std::vector<double>> grid_p(zc), grid_q(zc);
  std::vector<double> r_grid(opt.r_grid);
  for (int i = 0; i < opt.r_grid; ++i) r_grid[i] = static_cast<double>(i) / (opt.r_grid - 1);
  for (int z = 0; z < zc; ++z) {
    obj.push_back({x.m[z], x.n[z], cfg.volume(z), phi.m[z] + phi.n[z], &cfg.space});
    for (double r : r_grid) {
      const auto [p, q] = obj[z].pq(r);
      grid_p[z].push_back(p);
      grid_q[z].push_back(q);
    }
  }
  // Values closer than this count as ties; near r = 1 the objective is flat
  // to rounding once p saturates.
  auto tie = [](double v) { return 1e-10 * (1.0 + std::fabs(v)); };
  // Grid argmin over r for a given tau, ties toward larger r.
  auto grid_best = [&](int z, double tau, double& value) {
    int best = opt.r_grid - 1;
    value = std::numeric_limits<double>::infinity();
    for (int i = opt.r_grid - 1; i >= 0; --i) {
      const double g = grid_q[z][i] - grid_p[z][i] * (obj[z].big_phi + tau);
      if (i == opt.r_grid - 1 || g < value - tie(value)) {
        value = g;
        best = i;
      }
    }
    return best;
  };
  // Hamiltonian up to terms that do not depend on the control.
  auto h_of = [&](double tau, const std::vector<double>& g) {
    double h = a_coef * tau;
    for (int z = 0; z < zc; ++z) h += x.m[z] * g[z] / tau;
    return h;
  };

  Control best;
  best.radius.assign(zc, 1.0);
  double best_h = std::numeric_limits<double>::infinity();
  std::vector<int> best_idx(zc);
  std::vector<double> g(zc);
  for (int k = 0; k < opt.tau_grid; ++k) {
    const double tau = tau_lo * std::pow(tau_hi / tau_lo, static_cast<double>(k) / (opt.tau_grid - 1));
    std::vector<int> idx(zc);
    for (int z = 0; z < zc; ++z) idx[z] = grid_best(z, tau, g[z]);
    const double h = h_of(tau, g);
    if (h < best_h) {
      best_h = h;
      best.tau = tau;
      best_idx = idx;
      for (int z = 0; z < zc; ++z) best.radius[z] = r_grid[idx[z]];
    }
  }

  // Alternate golden-section refinement of each radius with the exact tau
  // minimizer a tau + b / tau for fixed radii.
  Control cur = best;
  const double step = 1.0 / (opt.r_grid - 1);
  for (int round = 0; round < 20; ++round) {
    double b_coef = 0.0;
    for (int z = 0; z < zc; ++z) {
      double gv;
      const int i = grid_best(z, cur.tau, gv);
      const double r0 = r_grid[i];
      auto f = [&](double r) {
        const auto [p, q] = obj[z].pq(r);
        return q - p * (obj[z].big_phi + cur.tau);
      };
      double fr;
      const double r = golden_min(f, std::max(0.0, r0 - step), std::min(1.0, r0 + step), opt.r_tol, fr);
      cur.radius[z] = fr < gv - tie(gv) ? r : r0;
      const auto [p, q] = obj[z].pq(cur.radius[z]);
      g[z] = q - p * (obj[z].big_phi + cur.tau);
      b_coef += x.m[z] * (q - p * obj[z].big_phi);
    }
    const double h = h_of(cur.tau, g);
    if (h < best_h) {
      best_h = h;
      best = cur;
    }
    const double tau_new = b_coef > 0.0 ? std::clamp(std::sqrt(b_coef / a_coef), tau_lo, tau_hi) : tau_lo;
    if (std::fabs(tau_new - cur.tau) < 1e-6) break;
    cur.tau = tau_new;
    for (int z = 0; z < zc; ++z) {
      const auto [p, q] = obj[z].pq(cur.radius[z]);
      g[z] = q - p * (obj[z].big_phi + cur.tau);
    }
    const double h2 = h_of(cur.tau, g);
    if (h2 < best_h) {
      best_h = h2;
      best = cur;
    }
  }
  return best;
}

std::vector<State> integrate_state(const std::vector<Control>& controls, const ScenarioConfig& cfg) {
  const int k = cfg.steps();
  if (static_cast<int>(controls.size()) != k + 1) throw std::domain_error("integrate_state: one control per grid point");
  std::vector<State> xs(k + 1);
  xs[0] = State{cfg.initial_m, cfg.initial_n};
  for (int j = 0; j < k; ++j) {
    const State f = state_derivative(xs[j], controls[j], j * cfg.dt, cfg);
    State next = xs[j];
    for (int z = 0; z < cfg.zone_count(); ++z) {
      next.m[z] = std::max(0.0, next.m[z] + cfg.dt * f.m[z]);
      next.n[z] = std::max(0.0, next.n[z] + cfg.dt * f.n[z]);
    }
    xs[j + 1] = std::move(next);
  }
  return xs;
}

std::vector<Costate> integrate_costate(const std::vector<State>& states, const std::vector<Control>& controls,
                                       const ScenarioConfig& cfg) {
  const int k = cfg.steps();
  std::vector<Costate> phis(k + 1);
  phis[k] = terminal_penalty_gradient(cfg);
  for (int j = k; j > 0; --j) {
    const Costate d = costate_derivative(states[j], controls[j], phis[j], j * cfg.dt, cfg);
    Costate prev = phis[j];
    for (int z = 0; z < cfg.zone_count(); ++z) {
      prev.m[z] -= cfg.dt * d.m[z];
      prev.n[z] -= cfg.dt * d.n[z];
    }
    phis[j - 1] = std::move(prev);
  }
  return phis;
}

double total_objective(const std::vector<State>& states, const std::vector<Control>& controls,
                       const ScenarioConfig& cfg) {
  const int k = cfg.steps();
  double total = terminal_penalty(states[k], cfg);
  for (int j = 0; j < k; ++j) total += cost_rate(states[j], controls[j], j * cfg.dt, cfg) * cfg.dt;
  return total;
}

FbsmResult fbsm_solve(const ScenarioConfig& cfg) {
  cfg.validate();
  const int k = cfg.steps();
  const double omega = cfg.fbsm.omega;
  FbsmResult res;
  res.times.resize(k + 1);
  res.controls.resize(k + 1);
  for (int j = 0; j <= k; ++j) {
    res.times[j] = j * cfg.dt;
    res.controls[j].tau = std::clamp(1.0, cfg.tau_min(res.times[j]), cfg.horizon);
    res.controls[j].radius.assign(cfg.zone_count(), 1.0);
  }
  std::vector<Control> fresh(k + 1);
  for (int it = 1; it <= cfg.fbsm.max_iter; ++it) {
    res.states = integrate_state(res.controls, cfg);
    res.costates = integrate_costate(res.states, res.controls, cfg);
    res.objective_history.push_back(total_objective(res.states, res.controls, cfg));
    parallel_for(
        k + 1,
        [&](std::size_t j) { fresh[j] = minimize_hamiltonian(res.states[j], res.costates[j], res.times[j], cfg); },
        cfg.fbsm.workers);
    double change = 0.0;
    for (int j = 0; j <= k; ++j) {
      Control& u = res.controls[j];
      const double tau = (1.0 - omega) * u.tau + omega * fresh[j].tau;
      change = std::max(change, std::fabs(tau - u.tau));
      u.tau = tau;
      for (int z = 0; z < cfg.zone_count(); ++z) {
        const double r = (1.0 - omega) * u.radius[z] + omega * fresh[j].radius[z];
        change = std::max(change, std::fabs(r - u.radius[z]));
        u.radius[z] = r;
      }
    }
    res.iterations = it;
    if (change < cfg.fbsm.tol) {
      res.converged = true;
      break;
    }
  }
  res.states = integrate_state(res.controls, cfg);
  res.costates = integrate_costate(res.states, res.controls, cfg);
  res.objective = total_objective(res.states, res.controls, cfg);
  res.objective_history.push_back(res.objective);
  return res;
}

}  // namespace rbmp
