#include "rbmp/records.hpp"

#include <cmath>
#include <ostream>

namespace rbmp {

using nlohmann::json;

json to_json_record(const MatchingInstance& instance) {
  json demand = json::array();
  for (const auto& d : instance.demand_points) {
    demand.push_back({{"coords", d.coords}, {"zone", d.zone ? json(*d.zone) : json(nullptr)}});
  }
  json limits = json::array();
  for (double r : instance.radius_limit_per_demand) limits.push_back(std::isinf(r) ? json(nullptr) : json(r));
  return {{"demand_points", demand},
          {"supply_points", instance.supply_points},
          {"radius_limit_per_demand", limits},
          {"norm", {{"D", instance.norm.dim}, {"p", instance.norm.norm_p}}}};
}

json to_json_record(const MatchingSolution& solution) {
  json pairs = json::array();
  for (const auto& p : solution.pairs) {
    pairs.push_back({{"demand", p.demand}, {"supply", p.supply}, {"distance", p.distance}});
  }
  return {{"pairs", pairs},
          {"unmatched_demand", solution.unmatched_demand},
          {"total_distance", solution.total_distance},
          {"matched_count", solution.matched_count}};
}

MatchingInstance instance_from_json(const json& j) {
  MatchingInstance inst;
  for (const auto& d : j.at("demand_points")) {
    DemandPoint p;
    p.coords = d.at("coords").get<Point>();
    if (d.contains("zone") && !d.at("zone").is_null()) p.zone = d.at("zone").get<int>();
    inst.demand_points.push_back(std::move(p));
  }
  inst.supply_points = j.at("supply_points").get<std::vector<Point>>();
  for (const auto& r : j.at("radius_limit_per_demand")) {
    inst.radius_limit_per_demand.push_back(r.is_null() ? kNoRadiusLimit : r.get<double>());
  }
  inst.norm.dim = j.at("norm").at("D").get<int>();
  inst.norm.norm_p = j.at("norm").at("p").get<double>();
  return inst;
}

MatchingSolution solution_from_json(const json& j) {
  MatchingSolution sol;
  for (const auto& p : j.at("pairs")) {
    sol.pairs.push_back({p.at("demand").get<int>(), p.at("supply").get<int>(), p.at("distance").get<double>()});
  }
  sol.unmatched_demand = j.at("unmatched_demand").get<std::vector<int>>();
  sol.total_distance = j.at("total_distance").get<double>();
  sol.matched_count = j.at("matched_count").get<int>();
  return sol;
}

void write_jsonl(std::ostream& out, const json& record) { out << record.dump() << '\n'; }

}  // namespace rbmp
