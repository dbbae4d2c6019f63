#include "rbmp/heterogeneous.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <stdexcept>

#include "rbmp/random.hpp"
#include "rbmp/specfun.hpp"

namespace rbmp {

void RegionProfile::validate() const {
  if (zones.empty()) throw std::domain_error("RegionProfile: no zones");
  std::set<int> ids;
  for (const auto& z : zones) {
    z.geometry.validate();
    z.profile.validate();
    if (z.profile.supply < z.profile.demand) {
      throw std::domain_error("RegionProfile: supply density below demand density");
    }
    if (std::fabs(z.profile.volume - z.geometry.volume) > 1e-12 * z.geometry.volume) {
      throw std::domain_error("RegionProfile: profile volume differs from zone volume");
    }
    if (!ids.insert(z.geometry.zone_id).second) throw std::domain_error("RegionProfile: duplicate zone id");
  }
  for (const auto& [id, nbrs] : adjacency) {
    if (!ids.count(id)) throw std::domain_error("RegionProfile: adjacency refers to unknown zone");
    for (int w : nbrs) {
      auto it = adjacency.find(w);
      if (it == adjacency.end() || std::find(it->second.begin(), it->second.end(), id) == it->second.end()) {
        throw std::domain_error("RegionProfile: adjacency not symmetric");
      }
    }
  }
  const auto layers = bfs_layers(*this, zones.front().geometry.zone_id, static_cast<int>(zones.size()));
  std::size_t reached = 0;
  for (const auto& l : layers) reached += l.size();
  if (reached != zones.size()) throw std::domain_error("RegionProfile: zone graph not connected");
}

std::size_t RegionProfile::index_of(int zone_id) const {
  for (std::size_t i = 0; i < zones.size(); ++i) {
    if (zones[i].geometry.zone_id == zone_id) return i;
  }
  throw std::out_of_range("RegionProfile: unknown zone id " + std::to_string(zone_id));
}

std::vector<std::vector<int>> bfs_layers(const RegionProfile& region, int origin, int max_layer) {
  region.index_of(origin);
  if (max_layer < 1) throw std::domain_error("bfs_layers: max_layer must be at least 1");
  std::vector<std::vector<int>> layers{{origin}};
  std::set<int> seen{origin};
  while (static_cast<int>(layers.size()) <= max_layer) {
    std::vector<int> next;
    for (int z : layers.back()) {
      auto it = region.adjacency.find(z);
      if (it == region.adjacency.end()) continue;
      for (int w : it->second) {
        if (seen.insert(w).second) next.push_back(w);
      }
    }
    if (next.empty()) break;
    std::sort(next.begin(), next.end());
    layers.push_back(std::move(next));
  }
  return layers;
}

namespace {

// Positive part of a normal difference with mean `mu` (counts) and variance
// `var`, with the half-unit continuity correction.
std::pair<double, double> positive_part(double mu, double var) {
  const double sd = std::sqrt(var);
  const double a = (0.5 - mu) / sd;
  const double prob = std_normal_cdf(-a);
  const double tail = 1.0 - std_normal_cdf(a);
  double cond = mu + sd * std_normal_pdf(a) / std::max(tail, 1e-300);
  if (tail < 1e-300) cond = 0.5;
  return {prob, std::max(cond, 0.0)};
}

double outer_rank_distance(double density, double volume, double excess, const SpaceSpec& space) {
  const double radius_v = ball_radius(space, volume);
  const int total = vertex_count(density, volume);
  const int terms = std::clamp(static_cast<int>(std::ceil(excess - 1e-12)), 1, total);
  double sum = 0.0;
  for (int k = total - terms + 1; k <= total; ++k) {
    sum += radius_v - kth_nearest_moment(k, total, 1, space, radius_v);
  }
  return sum / terms;
}

}  // namespace

ExcessStats excess_stats(const LocalProfile& profile, const ZoneGeometry& geometry) {
  profile.validate();
  geometry.validate();
  const double v = geometry.volume;
  const double mu = (profile.demand - profile.supply) * v;
  const double var = (profile.demand + profile.supply) * v;
  ExcessStats out;
  const auto [pd, cd] = positive_part(mu, var);
  const auto [ps, cs] = positive_part(-mu, var);
  out.prob_excess_demand = pd;
  out.mean_excess_demand = pd * cd;
  out.prob_excess_supply = ps;
  out.mean_excess_supply = ps * cs;
  return out;
}

double global_match_prob(const LocalProfile& profile, const ZoneGeometry& geometry) {
  const ExcessStats s = excess_stats(profile, geometry);
  return std::clamp(s.mean_excess_demand / (profile.demand * geometry.volume), 0.0, 1.0);
}

double layer_match_prob(const RegionProfile& region, int origin, int k) {
  if (k < 1) throw std::domain_error("layer_match_prob: layer index must be at least 1");
  const auto layers = bfs_layers(region, origin, k);
  auto layer_fail = [&](const std::vector<int>& layer) {
    double prod = 1.0;
    for (int z : layer) {
      const Zone& zone = region.zone(z);
      prod *= excess_stats(zone.profile, zone.geometry).prob_excess_demand;
    }
    return prod;
  };
  if (static_cast<int>(layers.size()) <= k) return 0.0;
  double before = 1.0;
  for (int i = 1; i < k; ++i) before *= layer_fail(layers[i]);
  return (1.0 - layer_fail(layers[k])) * before;
}

double global_distance(const RegionProfile& region, int origin, const SpaceSpec& space) {
  space.validate();
  const Zone& zo = region.zone(origin);
  const auto layers = bfs_layers(region, origin, 1);
  if (layers.size() < 2) throw DegenerateEstimate("global_distance: origin zone has no neighbours");
  const ExcessStats so = excess_stats(zo.profile, zo.geometry);
  if (std::llround(so.mean_excess_demand) < 1) {
    throw DegenerateEstimate("global_distance: less than one excess demand vertex expected");
  }
  const double leg_a = outer_rank_distance(zo.profile.demand, zo.geometry.volume, so.mean_excess_demand, space);
  double leg_c = 0.0;
  for (int w : layers[1]) {
    const Zone& zw = region.zone(w);
    const ExcessStats sw = excess_stats(zw.profile, zw.geometry);
    leg_c += outer_rank_distance(zw.profile.supply, zw.geometry.volume, sw.mean_excess_supply, space);
  }
  leg_c /= layers[1].size();
  return leg_a + leg_c;
}

DistanceMoments zone_estimates_simple(const LocalProfile& profile, const ZoneGeometry& geometry,
                                      const SpaceSpec& space) {
  geometry.validate();
  LocalProfile local = profile;
  local.volume = geometry.volume;
  try {
    return local_moments(local, space);
  } catch (const DegenerateEstimate&) {
    return {0.0, 0.0, match_probability(local, space)};
  }
}

double zone_distance_full(const RegionProfile& region, int origin, const SpaceSpec& space) {
  const Zone& z = region.zone(origin);
  const double alpha = global_match_prob(z.profile, z.geometry);
  const double local = zone_estimates_simple(z.profile, z.geometry, space).mean;
  try {
    return (1.0 - alpha) * local + alpha * global_distance(region, origin, space);
  } catch (const DegenerateEstimate&) {
    return local;
  }
}

DistanceMoments region_estimates(const RegionProfile& region, const SpaceSpec& space) {
  double weight = 0.0;
  DistanceMoments out{0.0, 0.0, 0.0};
  for (const auto& z : region.zones) {
    const DistanceMoments e = zone_estimates_simple(z.profile, z.geometry, space);
    const double w = z.profile.demand;
    weight += w;
    out.mean += w * e.mean;
    out.variance += w * e.variance;
    out.match_probability += w * e.match_probability;
  }
  if (weight > 0.0) {
    out.mean /= weight;
    out.variance /= weight;
    out.match_probability /= weight;
  }
  return out;
}

double region_distance_full(const RegionProfile& region, const SpaceSpec& space) {
  double weight = 0.0, total = 0.0;
  for (const auto& z : region.zones) {
    weight += z.profile.demand;
    total += z.profile.demand * zone_distance_full(region, z.geometry.zone_id, space);
  }
  return weight > 0.0 ? total / weight : 0.0;
}

std::vector<double> make_demand_profile(DemandPattern pattern, double base, double delta,
                                        const std::vector<ZoneGeometry>& zones, std::uint64_t seed) {
  if (!(base > 0.0)) throw std::domain_error("make_demand_profile: base density must be positive");
  if (!(delta >= 0.0 && delta <= 1.0)) throw std::domain_error("make_demand_profile: delta must lie in [0, 1]");
  std::vector<double> out;
  out.reserve(zones.size());
  Rng rng(seed);
  for (const auto& z : zones) {
    if (pattern == DemandPattern::uniform) {
      out.push_back(rng.uniform((1.0 - delta) * base, (1.0 + delta) * base));
    } else {
      out.push_back((1.0 - delta) * base + 2.0 * delta * base * (1.0 - z.normalized_center_distance));
    }
  }
  return out;
}

RegionProfile make_region(const ZoneGrid& grid, const std::vector<double>& demand, double supply_ratio,
                          double radius) {
  if (demand.size() != grid.zones.size()) throw std::domain_error("make_region: one density per zone required");
  RegionProfile region;
  region.adjacency = grid.adjacency;
  for (std::size_t i = 0; i < grid.zones.size(); ++i) {
    Zone z;
    z.geometry = grid.zones[i];
    z.profile = LocalProfile{demand[i], supply_ratio * demand[i], radius, grid.zones[i].volume};
    region.zones.push_back(std::move(z));
  }
  region.validate();
  return region;
}

}  // namespace rbmp
