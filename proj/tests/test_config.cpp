#include <doctest.h>

#include <stdexcept>

#include "rbmp/config.hpp"

using namespace rbmp;
using nlohmann::json;

TEST_CASE("experiment kinds round trip") {
  for (auto k : {ExperimentKind::scaling, ExperimentKind::radius, ExperimentKind::heterogeneous,
                 ExperimentKind::surface, ExperimentKind::dynamic}) {
    CHECK(parse_experiment_kind(to_string(k)) == k);
  }
  CHECK(parse_experiment_kind("hetero") == ExperimentKind::heterogeneous);
  CHECK_THROWS_AS(parse_experiment_kind("bogus"), std::invalid_argument);
  CHECK(parse_demand_pattern("mono-centric") == DemandPattern::mono_centric);
  CHECK_THROWS_AS(parse_demand_pattern("ring"), std::invalid_argument);
}

TEST_CASE("default grids") {
  const auto s = default_experiment(ExperimentKind::scaling);
  CHECK(s.volumes.size() == 50);
  CHECK(s.volumes.front() == 1.0);
  CHECK(s.volumes.back() == 50.0);
  CHECK(s.dims == std::vector<int>{2, 3});
  CHECK(s.replications == 100);

  const auto r = default_experiment(ExperimentKind::radius);
  CHECK(r.radii.size() == 20);
  CHECK(r.radii.back() == doctest::Approx(1.0));

  const auto h = default_experiment(ExperimentKind::heterogeneous);
  CHECK(h.patterns.size() == 2);
  CHECK(h.base_demand == std::vector<double>{3, 6, 9, 12, 15});

  const auto f = default_experiment(ExperimentKind::surface);
  CHECK(f.taus.front() == doctest::Approx(0.1));
  CHECK(f.taus.back() == doctest::Approx(5.0));
  CHECK(f.radii.front() == 0.0);
}

TEST_CASE("experiment overrides and validation") {
  const json j = json::parse(R"({"kind": "radius", "ratios": [2], "radii": [0.5, 1.0], "replications": 7,
                                 "seed": 99, "space": {"D": 3, "p": 1}})");
  const auto s = experiment_from_json(j, ExperimentKind::scaling);
  CHECK(s.kind == ExperimentKind::radius);
  CHECK(s.ratios == std::vector<double>{2});
  CHECK(s.replications == 7);
  CHECK(s.seed == 99);
  CHECK(s.space.dim == 3);
  CHECK(s.space.norm_p == 1.0);

  CHECK_THROWS_AS(experiment_from_json(json::parse(R"({"replications": 0})"), ExperimentKind::radius),
                  std::invalid_argument);
  CHECK_THROWS_AS(experiment_from_json(json::parse(R"({"radii": []})"), ExperimentKind::radius),
                  std::invalid_argument);
  CHECK_THROWS_AS(experiment_from_json(json::parse(R"({"radii": [1.5]})"), ExperimentKind::radius),
                  std::invalid_argument);
  CHECK_THROWS_AS(experiment_from_json(json::parse(R"({"ratios": [0.5]})"), ExperimentKind::radius),
                  std::invalid_argument);
}

TEST_CASE("scenario from builtin id") {
  const auto cfg = scenario_from_json(json::parse(R"({"scenario": 3})"));
  const auto ref = builtin_scenario(3);
  CHECK(cfg.zone_count() == 4);
  CHECK(cfg.lambda(1, 2.0) == ref.lambda(1, 2.0));
  CHECK(cfg.mu(3, 1.0) == ref.mu(3, 1.0));
  CHECK(cfg.initial_m == ref.initial_m);
}

TEST_CASE("scenario full description") {
  const json j = json::parse(R"({
    "zones": {"count": 2, "volume": 1.0},
    "adjacency": {"1": [2], "2": [1]},
    "horizon": 2.0, "dt": 0.02,
    "initial_m": [4, 6], "initial_n": [5, 9],
    "demand_rate": {"kind": "affine", "base": 1, "zone": 0.5, "time": 0.25},
    "supply_rate": 3,
    "fbsm": {"omega": 0.3, "tol": 1e-4, "max_iter": 50, "tau_grid": 20, "r_grid": 10}
  })");
  const auto cfg = scenario_from_json(j);
  CHECK(cfg.zone_count() == 2);
  CHECK(cfg.steps() == 100);
  CHECK(cfg.lambda(1, 2.0) == doctest::Approx(1 + 0.5 * 2 + 0.25 * 2));
  CHECK(cfg.mu(0, 1.0) == 3.0);
  CHECK(cfg.fbsm.omega == 0.3);
  CHECK(cfg.fbsm.max_iter == 50);
  CHECK(cfg.fbsm.r_grid == 10);
  CHECK(cfg.adjacency.at(1) == std::vector<int>{2});
}

TEST_CASE("scenario hex grid generator") {
  const auto cfg = scenario_from_json(json::parse(R"({"zones": {"grid": "hex", "cols": 3, "rows": 2},
    "initial_m": [1,1,1,1,1,1], "initial_n": [2,2,2,2,2,2]})"));
  CHECK(cfg.zone_count() == 6);
  CHECK(cfg.adjacency.size() == 6);
}

TEST_CASE("scenario validation errors") {
  CHECK_THROWS(scenario_from_json(json::parse(R"({"initial_m": [1, 2]})")));
  CHECK_THROWS(scenario_from_json(json::parse(R"({"demand_rate": {"kind": "cubic"}})")));
  CHECK_THROWS_AS(read_json_file("/nonexistent/config.json"), std::invalid_argument);
}
