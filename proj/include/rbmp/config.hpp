#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "rbmp/control.hpp"
#include "rbmp/heterogeneous.hpp"

namespace rbmp {

enum class ExperimentKind { scaling, radius, heterogeneous, surface, dynamic };

ExperimentKind parse_experiment_kind(const std::string& name);
std::string to_string(ExperimentKind kind);
DemandPattern parse_demand_pattern(const std::string& name);
std::string to_string(DemandPattern pattern);

/// Parameter grids for one experiment. Unused grids are ignored by the
/// experiment kind. Densities in `demand` are per unit volume.
struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::scaling;
  SpaceSpec space;
  std::vector<int> dims;
  std::vector<double> demand;
  std::vector<double> ratios;
  std::vector<double> volumes;
  std::vector<double> radii;
  std::vector<double> base_demand;
  std::vector<double> deltas;
  std::vector<DemandPattern> patterns;
  std::vector<int> scenarios;
  std::vector<double> taus;
  double arrival_demand = 10.0;
  double arrival_supply = 20.0;
  int replications = 100;
  std::uint64_t seed = 1;
  unsigned workers = 0;
  std::string output;

  void validate() const;
};

/// Grids used for the published experiments.
ExperimentSpec default_experiment(ExperimentKind kind);

/// Keys override the defaults of the named kind.
ExperimentSpec experiment_from_json(const nlohmann::json& j, ExperimentKind kind);

/// Either {"scenario": id, ...overrides} or a full description; see README.
ScenarioConfig scenario_from_json(const nlohmann::json& j);

nlohmann::json read_json_file(const std::string& path);

}  // namespace rbmp
