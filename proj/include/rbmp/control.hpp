#pragma once

#include <vector>

#include "rbmp/hexgrid.hpp"
#include "rbmp/specfun.hpp"

namespace rbmp {

/// base + zone_coef * z + time_coef * t, with z the 1-based zone index.
struct RateFunction {
  double base = 0.0;
  double zone_coef = 0.0;
  double time_coef = 0.0;

  static RateFunction constant(double value) { return {value, 0.0, 0.0}; }
  double operator()(int zone, double t) const { return base + zone_coef * zone + time_coef * t; }
  bool is_constant() const { return zone_coef == 0.0 && time_coef == 0.0; }
};

struct FbsmOptions {
  double omega = 0.5;
  double tol = 1e-3;
  int max_iter = 200;
  int tau_grid = 40;
  int r_grid = 40;
  double r_tol = 1e-3;
  double fd_step = 0.05;
  unsigned workers = 0;
};

struct ScenarioConfig {
  SpaceSpec space;
  std::vector<ZoneGeometry> zones;
  Adjacency adjacency;
  double horizon = 5.0;
  double dt = 0.01;
  std::vector<double> initial_m;
  std::vector<double> initial_n;
  RateFunction demand_rate;
  RateFunction supply_rate;
  FbsmOptions fbsm;

  int zone_count() const { return static_cast<int>(zones.size()); }
  int steps() const;
  double lambda(int zi, double t) const { return demand_rate(zi + 1, t); }
  double mu(int zi, double t) const { return supply_rate(zi + 1, t); }
  double volume(int zi) const { return zones[zi].volume; }
  /// Smallest admissible pooling interval at time t, max_z 1/(lambda_z V_z).
  double tau_min(double t) const;
  void validate() const;
};

/// Unit-volume zones and initial densities m = n = (3, 5, 10, 20) over a horizon
/// of 5 with rates: 1 -> lambda = mu = 2; 2 -> lambda = 2, mu = 4;
/// 3 -> lambda = 2 + z + t, mu = 4 + z + 2t.
ScenarioConfig builtin_scenario(int id);

/// Densities per zone.
struct State {
  std::vector<double> m;
  std::vector<double> n;
};

/// Multipliers for the m and n components of the state.
using Costate = State;

struct Control {
  double tau = 1.0;
  std::vector<double> radius;
};

struct MatchPD {
  double p = 0.0;
  double d = 0.0;
};

/// Matching probability and distance at non-integer densities: bilinear in the
/// counts between the lattice corners floor/ceil(mV) x floor/ceil(nV), each
/// corner at least 1 and with the supply corner raised to the demand corner.
/// Throws if n < m.
MatchPD pd_continuous(double m, double n, double r, double volume, const SpaceSpec& space);

/// Same interpolation without the n >= m check (used for derivative stencils).
MatchPD pd_lattice(double m, double n, double r, double volume, const SpaceSpec& space);

double cost_rate(const State& x, const Control& u, double t, const ScenarioConfig& cfg);
double step_cost(const State& x, const Control& u, double t, const ScenarioConfig& cfg);
State state_derivative(const State& x, const Control& u, double t, const ScenarioConfig& cfg);
double terminal_penalty(const State& x, const ScenarioConfig& cfg);
Costate terminal_penalty_gradient(const ScenarioConfig& cfg);
double hamiltonian(const State& x, const Control& u, const Costate& phi, double t, const ScenarioConfig& cfg);

/// Partial derivatives of (p, d) with respect to m and n by central differences.
struct PDJacobian {
  double p_m = 0.0, p_n = 0.0, d_m = 0.0, d_n = 0.0;
};
PDJacobian pd_jacobian(double m, double n, double r, double volume, const SpaceSpec& space, double h);

Costate costate_derivative(const State& x, const Control& u, const Costate& phi, double t,
                           const ScenarioConfig& cfg);

Control minimize_hamiltonian(const State& x, const Costate& phi, double t, const ScenarioConfig& cfg);

struct FbsmResult {
  std::vector<double> times;
  std::vector<Control> controls;
  std::vector<State> states;
  std::vector<Costate> costates;
  /// Objective (terminal penalty plus integrated cost rate) after each sweep.
  std::vector<double> objective_history;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Explicit-Euler forward sweep of the state under a control trajectory.
std::vector<State> integrate_state(const std::vector<Control>& controls, const ScenarioConfig& cfg);

/// Explicit-Euler backward sweep of the costate from the terminal gradient.
std::vector<Costate> integrate_costate(const std::vector<State>& states, const std::vector<Control>& controls,
                                       const ScenarioConfig& cfg);

/// Terminal penalty plus the left-rectangle integral of the cost rate.
double total_objective(const std::vector<State>& states, const std::vector<Control>& controls,
                       const ScenarioConfig& cfg);

FbsmResult fbsm_solve(const ScenarioConfig& cfg);

}  // namespace rbmp
