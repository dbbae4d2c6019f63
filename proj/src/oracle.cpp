#include "rbmp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rbmp/assignment.hpp"
#include "rbmp/parallel.hpp"
#include "rbmp/random.hpp"

namespace rbmp {

double lp_distance(const Point& a, const Point& b, double norm_p) {
  if (a.size() != b.size()) throw std::domain_error("lp_distance: dimension mismatch");
  if (norm_p == 2.0) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
  }
  if (std::isinf(norm_p)) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s = std::max(s, std::fabs(a[i] - b[i]));
    return s;
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::pow(std::fabs(a[i] - b[i]), norm_p);
  return std::pow(s, 1.0 / norm_p);
}

Point sample_in_ball(Rng& rng, const SpaceSpec& space, double radius) {
  const Point origin(space.dim, 0.0);
  Point x(space.dim);
  for (;;) {
    for (auto& c : x) c = rng.uniform(-radius, radius);
    if (lp_distance(x, origin, space.norm_p) <= radius) return x;
  }
}

MatchingInstance sample_hyperball(int m_count, int n_count, const SpaceSpec& space, double volume,
                                  std::uint64_t seed) {
  space.validate();
  if (m_count < 0 || n_count < 0) throw std::domain_error("sample_hyperball: counts must be nonnegative");
  const double radius = ball_radius(space, volume);
  Rng rng(seed);
  MatchingInstance inst;
  inst.norm = space;
  for (int i = 0; i < m_count; ++i) inst.demand_points.push_back({sample_in_ball(rng, space, radius), std::nullopt});
  for (int j = 0; j < n_count; ++j) inst.supply_points.push_back(sample_in_ball(rng, space, radius));
  inst.radius_limit_per_demand.assign(m_count, kNoRadiusLimit);
  return inst;
}

MatchingInstance with_radius_limit(MatchingInstance instance, double limit) {
  if (!(limit >= 0.0)) throw std::domain_error("with_radius_limit: limit must be nonnegative");
  instance.radius_limit_per_demand.assign(instance.demand_points.size(), limit);
  return instance;
}

namespace {

Point sample_in_zone(Rng& rng, const ZoneGeometry& g, const SpaceSpec& space) {
  if (g.shape == ZoneShape::ball) {
    Point p = sample_in_ball(rng, space, ball_radius(space, g.volume));
    for (std::size_t i = 0; i < p.size(); ++i) p[i] += g.center[i];
    return p;
  }
  if (space.dim != 2) throw std::domain_error("sample_region: hexagonal zones require D = 2");
  const double a = hex_circumradius(g.volume);
  const double h = std::sqrt(3.0) / 2.0 * a;
  for (;;) {
    const double x = g.center[0] + rng.uniform(-a, a);
    const double y = g.center[1] + rng.uniform(-h, h);
    if (hex_contains(g.center, a, x, y)) return {x, y};
  }
}

}  // namespace

MatchingInstance sample_region(const RegionProfile& region, const SpaceSpec& space, std::uint64_t seed) {
  space.validate();
  Rng rng(seed);
  MatchingInstance inst;
  inst.norm = space;
  for (const auto& z : region.zones) {
    const int md = rng.poisson(z.profile.demand * z.geometry.volume);
    const int ns = rng.poisson(z.profile.supply * z.geometry.volume);
    const double limit = z.profile.radius * ball_radius(space, z.geometry.volume);
    for (int i = 0; i < md; ++i) {
      inst.demand_points.push_back({sample_in_zone(rng, z.geometry, space), z.geometry.zone_id});
      inst.radius_limit_per_demand.push_back(limit);
    }
    for (int j = 0; j < ns; ++j) inst.supply_points.push_back(sample_in_zone(rng, z.geometry, space));
  }
  return inst;
}

MatchingSolution solve_matching(const MatchingInstance& instance) {
  const int m = static_cast<int>(instance.demand_points.size());
  const int n = static_cast<int>(instance.supply_points.size());
  if (static_cast<int>(instance.radius_limit_per_demand.size()) != m) {
    throw std::domain_error("solve_matching: one radius limit per demand point required");
  }
  const bool euclid = instance.norm.norm_p == 2.0;
  std::vector<std::vector<std::pair<int, double>>> edges(m);
  double feasible_sum = 0.0;
  for (int i = 0; i < m; ++i) {
    const Point& a = instance.demand_points[i].coords;
    const double limit = instance.radius_limit_per_demand[i];
    const double limit_sq = limit * limit;
    for (int j = 0; j < n; ++j) {
      const Point& b = instance.supply_points[j];
      double d;
      if (euclid) {
        double s = 0.0;
        for (std::size_t c = 0; c < a.size(); ++c) s += (a[c] - b[c]) * (a[c] - b[c]);
        if (s > limit_sq) continue;
        d = std::sqrt(s);
      } else {
        d = lp_distance(a, b, instance.norm.norm_p);
        if (d > limit) continue;
      }
      edges[i].emplace_back(j, d);
      feasible_sum += d;
    }
  }
  // Row i may fall back to its private column n + i at a cost above any
  // complete set of real edges, so cardinality is maximized first.
  const double penalty = 1.0 + feasible_sum;
  SparseCostMatrix cm;
  cm.rows = m;
  cm.cols = n + m;
  for (int i = 0; i < m; ++i) {
    edges[i].emplace_back(n + i, penalty);
    cm.add_row(edges[i]);
  }
  const Assignment asg = solve_assignment(cm);
  MatchingSolution sol;
  for (int i = 0; i < m; ++i) {
    const int j = asg.row_to_col[i];
    if (j >= n) {
      sol.unmatched_demand.push_back(i);
      continue;
    }
    const auto it = std::find_if(edges[i].begin(), edges[i].end(), [j](const auto& e) { return e.first == j; });
    sol.pairs.push_back({i, j, it->second});
    sol.total_distance += it->second;
  }
  sol.matched_count = static_cast<int>(sol.pairs.size());
  return sol;
}

ReplicationSample summarize(const MatchingInstance& instance, const MatchingSolution& solution) {
  ReplicationSample s;
  s.demand = static_cast<int>(instance.demand_points.size());
  s.matched = solution.matched_count;
  for (const auto& p : solution.pairs) s.sum_sq_distance += p.distance * p.distance;
  if (s.matched > 0) s.mean_distance = solution.total_distance / s.matched;
  return s;
}

namespace {

std::pair<double, double> mean_std(const std::vector<double>& xs) {
  if (xs.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= xs.size();
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (xs.size() - 1))};
}

}  // namespace

SampleStats run_replications(const InstanceSampler& generator, const MatchingSolver& solver, int count,
                             std::uint64_t seed, unsigned workers) {
  if (count < 1) throw std::domain_error("run_replications: count must be at least 1");
  std::vector<ReplicationSample> samples(count);
  std::vector<double> totals(count);
  parallel_for(
      count,
      [&](std::size_t i) {
        const MatchingInstance inst = generator(seed + i);
        const MatchingSolution sol = solver(inst);
        samples[i] = summarize(inst, sol);
        totals[i] = sol.total_distance;
      },
      workers);
  std::vector<double> dist, frac;
  double pooled_sum = 0.0, pooled_sq = 0.0;
  long pooled_n = 0;
  for (int i = 0; i < count; ++i) {
    const auto& s = samples[i];
    if (s.demand > 0) frac.push_back(static_cast<double>(s.matched) / s.demand);
    if (s.matched > 0) dist.push_back(s.mean_distance);
    pooled_sum += totals[i];
    pooled_sq += s.sum_sq_distance;
    pooled_n += s.matched;
  }
  SampleStats out;
  std::tie(out.mean_distance, out.std_distance) = mean_std(dist);
  std::tie(out.mean_match_fraction, out.std_match_fraction) = mean_std(frac);
  if (pooled_n > 1) {
    const double mu = pooled_sum / pooled_n;
    out.pooled_std_distance = std::sqrt(std::max(0.0, (pooled_sq - pooled_n * mu * mu) / (pooled_n - 1)));
  }
  out.replications = count;
  out.distance_samples = static_cast<int>(dist.size());
  out.fraction_samples = static_cast<int>(frac.size());
  out.seed = seed;
  return out;
}

std::map<int, ZoneTally> zone_tally(const MatchingInstance& instance, const MatchingSolution& solution) {
  std::map<int, ZoneTally> out;
  for (const auto& d : instance.demand_points) {
    if (d.zone) ++out[*d.zone].demand;
  }
  for (const auto& p : solution.pairs) {
    const auto& zone = instance.demand_points[p.demand].zone;
    if (!zone) continue;
    ++out[*zone].matched;
    out[*zone].distance += p.distance;
  }
  return out;
}

}  // namespace rbmp
