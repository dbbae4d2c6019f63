#pragma once

#include <cstdint>
#include <vector>

#include "rbmp/hexgrid.hpp"
#include "rbmp/homogeneous.hpp"

namespace rbmp {

struct Zone {
  ZoneGeometry geometry;
  LocalProfile profile;
};

/// Zones with their local profiles and the zone adjacency graph.
struct RegionProfile {
  std::vector<Zone> zones;
  Adjacency adjacency;

  /// Symmetric, connected adjacency; each profile valid with n >= m and the
  /// profile volume equal to the zone volume.
  void validate() const;
  std::size_t index_of(int zone_id) const;
  const Zone& zone(int zone_id) const { return zones[index_of(zone_id)]; }
};

/// Normal approximation to the excess demand m+ and excess supply n+ of a zone.
/// Means are vertex counts.
struct ExcessStats {
  double prob_excess_demand = 0.0;
  double mean_excess_demand = 0.0;
  double prob_excess_supply = 0.0;
  double mean_excess_supply = 0.0;
};

/// Zones at graph distance exactly 0, 1, ..., max_layer from `origin`.
std::vector<std::vector<int>> bfs_layers(const RegionProfile& region, int origin, int max_layer);

ExcessStats excess_stats(const LocalProfile& profile, const ZoneGeometry& geometry);

/// Fraction of the zone's demand expected to be matched outside the zone, in [0, 1].
double global_match_prob(const LocalProfile& profile, const ZoneGeometry& geometry);

/// Probability that an excess demand vertex of `origin` finds excess supply in
/// layer k but in no nearer layer. The origin itself is conditioned on having
/// excess demand, so its own factor is 1.
double layer_match_prob(const RegionProfile& region, int origin, int k);

/// Expected distance of a global match via the first layer: distance to the
/// origin boundary from its outermost demand ranks plus the boundary-to-vertex
/// distance in the neighbouring zones. Throws DegenerateEstimate when fewer
/// than one excess demand vertex is expected or the origin has no neighbours.
double global_distance(const RegionProfile& region, int origin, const SpaceSpec& space);

/// Local and global legs combined by total expectation. Falls back to the
/// local estimate when the global leg is degenerate.
double zone_distance_full(const RegionProfile& region, int origin, const SpaceSpec& space);

/// Homogeneous estimate with zone-local parameters. When p < 1e-9 the mean is
/// reported as 0.
DistanceMoments zone_estimates_simple(const LocalProfile& profile, const ZoneGeometry& geometry,
                                      const SpaceSpec& space);

/// Demand-weighted averages of the zone estimates.
DistanceMoments region_estimates(const RegionProfile& region, const SpaceSpec& space);

/// Demand-weighted mean of zone_distance_full.
double region_distance_full(const RegionProfile& region, const SpaceSpec& space);

enum class DemandPattern { uniform, mono_centric };

/// Per-zone demand densities. Uniform draws U((1-delta) base, (1+delta) base)
/// in zone order from `seed`; mono-centric is (1-delta) base + 2 delta base (1 - d_z).
std::vector<double> make_demand_profile(DemandPattern pattern, double base, double delta,
                                        const std::vector<ZoneGeometry>& zones, std::uint64_t seed);

/// Region with supply = ratio * demand and a common radius fraction.
RegionProfile make_region(const ZoneGrid& grid, const std::vector<double>& demand, double supply_ratio,
                          double radius);

}  // namespace rbmp
