#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rbmp/config.hpp"
#include "rbmp/experiments.hpp"

using namespace rbmp;

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  std::optional<int> reps;
  std::optional<unsigned> workers;
  std::string out;
  std::string config;
  bool check = false;
};

void emit(const Table& table, const std::string& path) {
  if (path.empty() || path == "-") {
    table.write_csv(std::cout);
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  table.write_csv(f);
}

int report(const std::vector<Check>& checks, bool enforce) {
  for (const auto& c : checks) {
    std::cerr << (c.passed ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) std::cerr << ": " << c.detail;
    std::cerr << "\n";
  }
  return enforce && !all_passed(checks) ? 2 : 0;
}

ExperimentSpec load_spec(ExperimentKind kind, const Globals& g) {
  ExperimentSpec s = g.config.empty() ? default_experiment(kind) : experiment_from_json(read_json_file(g.config), kind);
  if (g.seed) s.seed = *g.seed;
  if (g.reps) s.replications = *g.reps;
  if (g.workers) s.workers = *g.workers;
  if (!g.out.empty()) s.output = g.out;
  s.validate();
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matching probability and distance estimates with Monte-Carlo checks and dynamic control."};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Base seed; replication i uses seed + i");
  app.add_option("--reps", g.reps, "Replications per grid cell")->check(CLI::PositiveNumber);
  app.add_option("--workers", g.workers, "Worker threads (0 = hardware)");
  app.add_option("--out", g.out, "Output CSV path ('-' for stdout)");
  app.add_option("--config", g.config, "JSON config file")->check(CLI::ExistingFile);
  app.add_flag("--check", g.check, "Exit with 2 when an assertion fails");

  LocalProfile prof{10.0, 30.0, 1.0, 1.0};
  SpaceSpec space;
  auto* eval = app.add_subcommand("eval", "Evaluate the analytic estimates for one local profile");
  eval->add_option("-m,--demand", prof.demand, "Demand density");
  eval->add_option("-n,--supply", prof.supply, "Supply density");
  eval->add_option("-r,--radius", prof.radius, "Radius fraction in [0, 1]");
  eval->add_option("-V,--volume", prof.volume, "Region volume");
  eval->add_option("-D,--dim", space.dim, "Dimension");
  eval->add_option("-p,--norm", space.norm_p, "Norm exponent");

  app.add_subcommand("scaling", "Expected distance versus region volume");
  app.add_subcommand("radius", "Match probability and distance versus radius");
  app.add_subcommand("hetero", "Region estimates on the 5x5 hexagonal grid");
  app.add_subcommand("surface", "Single-epoch cost over (tau, r)");
  int scenario = 1;
  auto* dyn = app.add_subcommand("dynamic", "Solve a dynamic control scenario");
  dyn->add_option("-s,--scenario", scenario, "Built-in scenario id (1, 2 or 3)")->check(CLI::Range(1, 3));

  CLI11_PARSE(app, argc, argv);

  try {
    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "eval") {
      std::cout << eval_report(prof, space);
      return 0;
    }
    if (cmd == "dynamic") {
      ScenarioConfig cfg =
          g.config.empty() ? builtin_scenario(scenario) : scenario_from_json(read_json_file(g.config));
      if (g.workers) cfg.fbsm.workers = *g.workers;
      if (!g.config.empty()) {
        // Built-in assertions only apply while the model itself is untouched.
        const auto j = read_json_file(g.config);
        scenario = j.value("scenario", 0);
        for (const char* key : {"space", "zones", "adjacency", "horizon", "dt", "initial_m", "initial_n",
                                "demand_rate", "supply_rate"}) {
          if (j.contains(key)) scenario = 0;
        }
      }
      const FbsmResult res = fbsm_solve(cfg);
      emit(trajectory_table(cfg, res), g.out);
      std::cerr << convergence_report(res);
      const int rc = report(dynamic_checks(scenario, cfg, res), g.check);
      return res.converged ? rc : (g.check ? 2 : 1);
    }
    const ExperimentKind kind = parse_experiment_kind(cmd);
    const ExperimentSpec spec = load_spec(kind, g);
    switch (kind) {
      case ExperimentKind::scaling: {
        const auto res = run_scaling(spec);
        emit(res.table(), spec.output);
        return report(scaling_checks(res), g.check);
      }
      case ExperimentKind::radius: {
        const auto res = run_radius(spec);
        emit(res.table(), spec.output);
        return report(radius_checks(res), g.check);
      }
      case ExperimentKind::heterogeneous: {
        const auto res = run_hetero(spec);
        emit(res.table(), spec.output);
        return report(hetero_checks(res), g.check);
      }
      case ExperimentKind::surface: {
        const auto res = run_surface(spec);
        emit(res.table(), spec.output);
        return report(surface_checks(res, spec), g.check);
      }
      default:
        return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
