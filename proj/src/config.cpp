#include "rbmp/config.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace rbmp {

using nlohmann::json;

ExperimentKind parse_experiment_kind(const std::string& name) {
  if (name == "scaling") return ExperimentKind::scaling;
  if (name == "radius") return ExperimentKind::radius;
  if (name == "hetero" || name == "heterogeneous") return ExperimentKind::heterogeneous;
  if (name == "surface") return ExperimentKind::surface;
  if (name == "dynamic") return ExperimentKind::dynamic;
  throw std::invalid_argument("unknown experiment kind '" + name + "'");
}

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::scaling: return "scaling";
    case ExperimentKind::radius: return "radius";
    case ExperimentKind::heterogeneous: return "heterogeneous";
    case ExperimentKind::surface: return "surface";
    case ExperimentKind::dynamic: return "dynamic";
  }
  return "";
}

DemandPattern parse_demand_pattern(const std::string& name) {
  if (name == "uniform") return DemandPattern::uniform;
  if (name == "mono-centric" || name == "mono_centric" || name == "monocentric") return DemandPattern::mono_centric;
  throw std::invalid_argument("unknown demand pattern '" + name + "'");
}

std::string to_string(DemandPattern pattern) {
  return pattern == DemandPattern::uniform ? "uniform" : "mono-centric";
}

namespace {

std::vector<double> range(double lo, double hi, int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
  return out;
}

template <class T>
void need_nonempty(const std::vector<T>& v, const char* name) {
  if (v.empty()) throw std::invalid_argument(std::string("experiment grid '") + name + "' is empty");
}

}  // namespace

void ExperimentSpec::validate() const {
  space.validate();
  if (replications < 1) throw std::invalid_argument("replications must be at least 1");
  switch (kind) {
    case ExperimentKind::scaling:
      need_nonempty(dims, "dims");
      need_nonempty(demand, "demand");
      need_nonempty(ratios, "ratios");
      need_nonempty(volumes, "volumes");
      break;
    case ExperimentKind::radius:
      need_nonempty(demand, "demand");
      need_nonempty(ratios, "ratios");
      need_nonempty(radii, "radii");
      break;
    case ExperimentKind::heterogeneous:
      need_nonempty(patterns, "patterns");
      need_nonempty(ratios, "ratios");
      need_nonempty(radii, "radii");
      need_nonempty(base_demand, "base_demand");
      need_nonempty(deltas, "deltas");
      break;
    case ExperimentKind::surface:
      need_nonempty(demand, "demand");
      need_nonempty(ratios, "ratios");
      need_nonempty(radii, "radii");
      need_nonempty(taus, "taus");
      break;
    case ExperimentKind::dynamic:
      need_nonempty(scenarios, "scenarios");
      break;
  }
  for (double r : radii) {
    if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("radii must lie in [0, 1]");
  }
  for (double q : ratios) {
    if (!(q >= 1.0)) throw std::invalid_argument("supply-to-demand ratios must be at least 1");
  }
}

ExperimentSpec default_experiment(ExperimentKind kind) {
  ExperimentSpec s;
  s.kind = kind;
  switch (kind) {
    case ExperimentKind::scaling:
      s.dims = {2, 3};
      s.demand = {2.0};
      s.ratios = {1.0, 1.5, 2.0, 3.0};
      s.volumes = range(1, 50, 50);
      break;
    case ExperimentKind::radius:
      s.demand = {10.0};
      s.ratios = {1.0, 1.5, 2.0, 3.0};
      s.volumes = {1.0};
      for (int j = 1; j <= 20; ++j) s.radii.push_back(j / 20.0);
      break;
    case ExperimentKind::heterogeneous:
      s.patterns = {DemandPattern::uniform, DemandPattern::mono_centric};
      s.ratios = {1.0, 2.0};
      s.radii = {0.6, 0.8};
      s.base_demand = {3, 6, 9, 12, 15};
      s.deltas = {0.5};
      break;
    case ExperimentKind::surface:
      s.demand = {10.0};
      s.ratios = {1.0, 1.5, 2.0, 3.0};
      s.taus = range(0.1, 5.0, 50);
      s.radii = range(0.0, 1.0, 51);
      break;
    case ExperimentKind::dynamic:
      s.scenarios = {1, 2, 3};
      s.replications = 1;
      break;
  }
  return s;
}

namespace {

template <class T>
void read_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

RateFunction rate_from_json(const json& j) {
  if (j.is_number()) return RateFunction::constant(j.get<double>());
  const std::string kind = j.value("kind", "constant");
  if (kind == "constant") return RateFunction::constant(j.at("value").get<double>());
  if (kind == "affine") return {j.value("base", 0.0), j.value("zone", 0.0), j.value("time", 0.0)};
  throw std::invalid_argument("rate kind must be 'constant' or 'affine'");
}

SpaceSpec space_from_json(const json& j) {
  SpaceSpec s;
  s.dim = j.value("D", 2);
  s.norm_p = j.value("p", 2.0);
  s.validate();
  return s;
}

}  // namespace

ExperimentSpec experiment_from_json(const json& j, ExperimentKind kind) {
  if (j.contains("kind")) kind = parse_experiment_kind(j.at("kind").get<std::string>());
  ExperimentSpec s = default_experiment(kind);
  if (j.contains("space")) s.space = space_from_json(j.at("space"));
  read_if(j, "dims", s.dims);
  read_if(j, "demand", s.demand);
  read_if(j, "ratios", s.ratios);
  read_if(j, "volumes", s.volumes);
  read_if(j, "radii", s.radii);
  read_if(j, "base_demand", s.base_demand);
  read_if(j, "deltas", s.deltas);
  read_if(j, "scenarios", s.scenarios);
  read_if(j, "taus", s.taus);
  read_if(j, "arrival_demand", s.arrival_demand);
  read_if(j, "arrival_supply", s.arrival_supply);
  read_if(j, "replications", s.replications);
  read_if(j, "seed", s.seed);
  read_if(j, "workers", s.workers);
  read_if(j, "output", s.output);
  if (j.contains("patterns")) {
    s.patterns.clear();
    for (const auto& p : j.at("patterns")) s.patterns.push_back(parse_demand_pattern(p.get<std::string>()));
  }
  s.validate();
  return s;
}

ScenarioConfig scenario_from_json(const json& j) {
  ScenarioConfig cfg = builtin_scenario(j.value("scenario", 1));
  if (j.contains("space")) cfg.space = space_from_json(j.at("space"));
  if (j.contains("zones")) {
    const json& z = j.at("zones");
    cfg.zones.clear();
    cfg.adjacency.clear();
    if (z.is_object() && z.value("grid", "") == "hex") {
      const ZoneGrid grid = make_hex_grid(z.value("cols", 5), z.value("rows", 5), z.value("volume", 1.0));
      cfg.zones = grid.zones;
      cfg.adjacency = grid.adjacency;
    } else if (z.is_object()) {
      const int count = z.at("count").get<int>();
      for (int i = 1; i <= count; ++i) {
        ZoneGeometry g;
        g.zone_id = i;
        g.center = {static_cast<double>(i - 1), 0.0};
        g.volume = z.value("volume", 1.0);
        g.shape = ZoneShape::ball;
        cfg.zones.push_back(g);
      }
    } else {
      for (const auto& e : z) {
        ZoneGeometry g;
        g.zone_id = e.at("id").get<int>();
        g.center = e.value("center", std::vector<double>{0.0, 0.0});
        g.volume = e.value("volume", 1.0);
        g.shape = ZoneShape::ball;
        cfg.zones.push_back(g);
      }
    }
    assign_normalized_distances(cfg.zones);
  }
  if (j.contains("adjacency")) {
    cfg.adjacency.clear();
    for (const auto& [key, nbrs] : j.at("adjacency").items()) cfg.adjacency[std::stoi(key)] = nbrs.get<std::vector<int>>();
  }
  read_if(j, "horizon", cfg.horizon);
  read_if(j, "dt", cfg.dt);
  read_if(j, "initial_m", cfg.initial_m);
  read_if(j, "initial_n", cfg.initial_n);
  if (j.contains("demand_rate")) cfg.demand_rate = rate_from_json(j.at("demand_rate"));
  if (j.contains("supply_rate")) cfg.supply_rate = rate_from_json(j.at("supply_rate"));
  if (j.contains("fbsm")) {
    const json& f = j.at("fbsm");
    read_if(f, "omega", cfg.fbsm.omega);
    read_if(f, "tol", cfg.fbsm.tol);
    read_if(f, "max_iter", cfg.fbsm.max_iter);
    read_if(f, "tau_grid", cfg.fbsm.tau_grid);
    read_if(f, "r_grid", cfg.fbsm.r_grid);
    read_if(f, "r_tol", cfg.fbsm.r_tol);
    read_if(f, "fd_step", cfg.fbsm.fd_step);
    read_if(f, "workers", cfg.fbsm.workers);
  }
  cfg.validate();
  return cfg;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  return json::parse(in);
}

}  // namespace rbmp
