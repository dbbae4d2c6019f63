#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "rbmp/heterogeneous.hpp"
#include "rbmp/specfun.hpp"

namespace rbmp {

class Rng;

using Point = std::vector<double>;

struct DemandPoint {
  Point coords;
  std::optional<int> zone;
};

struct MatchingInstance {
  std::vector<DemandPoint> demand_points;
  std::vector<Point> supply_points;
  /// Per-demand maximum matching distance; infinity means unconstrained.
  std::vector<double> radius_limit_per_demand;
  SpaceSpec norm;
};

struct MatchedPair {
  int demand = 0;
  int supply = 0;
  double distance = 0.0;
};

struct MatchingSolution {
  std::vector<MatchedPair> pairs;
  std::vector<int> unmatched_demand;
  double total_distance = 0.0;
  int matched_count = 0;
};

/// Aggregates over replications. Distances are per-instance averages over
/// matched pairs; fractions are matched demand over demand. Instances without
/// demand (or without matches, for distances) are left out of the respective
/// averages. std fields use the n-1 denominator and are 0 for one sample.
struct SampleStats {
  double mean_distance = 0.0;
  double std_distance = 0.0;
  double mean_match_fraction = 0.0;
  double std_match_fraction = 0.0;
  /// Standard deviation of all matched distances pooled over replications.
  double pooled_std_distance = 0.0;
  int replications = 0;
  int distance_samples = 0;
  int fraction_samples = 0;
  std::uint64_t seed = 0;
};

inline constexpr double kNoRadiusLimit = std::numeric_limits<double>::infinity();

double lp_distance(const Point& a, const Point& b, double norm_p);

/// Uniform point in the L^p ball of the given radius centred at the origin.
Point sample_in_ball(Rng& rng, const SpaceSpec& space, double radius);

/// m_count demand and n_count supply points uniform in the L^p ball of volume
/// V, without radius limits.
MatchingInstance sample_hyperball(int m_count, int n_count, const SpaceSpec& space, double volume,
                                  std::uint64_t seed);

/// Copy of `instance` with every demand limited to `limit`.
MatchingInstance with_radius_limit(MatchingInstance instance, double limit);

/// Poisson counts per zone, uniform locations per zone; each demand carries
/// its zone's limit r_z R V_z^{1/D}.
MatchingInstance sample_region(const RegionProfile& region, const SpaceSpec& space, std::uint64_t seed);

/// Maximum-cardinality matching of least total distance under the radius limits.
MatchingSolution solve_matching(const MatchingInstance& instance);

struct ReplicationSample {
  double mean_distance = 0.0;
  double sum_sq_distance = 0.0;
  int demand = 0;
  int matched = 0;
};

ReplicationSample summarize(const MatchingInstance& instance, const MatchingSolution& solution);

using InstanceSampler = std::function<MatchingInstance(std::uint64_t seed)>;
using MatchingSolver = std::function<MatchingSolution(const MatchingInstance&)>;

/// Replication i draws from generator(seed + i). Deterministic for any worker count.
SampleStats run_replications(const InstanceSampler& generator, const MatchingSolver& solver, int count,
                             std::uint64_t seed, unsigned workers = 0);

/// Per-zone demand, matched demand and summed matched distance.
struct ZoneTally {
  int demand = 0;
  int matched = 0;
  double distance = 0.0;
};

std::map<int, ZoneTally> zone_tally(const MatchingInstance& instance, const MatchingSolution& solution);

}  // namespace rbmp
