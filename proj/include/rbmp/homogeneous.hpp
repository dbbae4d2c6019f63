#pragma once

#include <stdexcept>
#include <vector>

#include "rbmp/specfun.hpp"

namespace rbmp {

/// Parameters of one homogeneous matching pocket.
struct LocalProfile {
  double demand = 1.0;  ///< demand density m
  double supply = 1.0;  ///< supply density n, n >= m
  double radius = 1.0;  ///< matching radius as a fraction of the ball radius R_V
  double volume = 1.0;  ///< region volume V

  void validate() const;
  int demand_count() const;
  int supply_count() const;
};

struct DistanceMoments {
  double mean = 0.0;
  double variance = 0.0;
  double match_probability = 0.0;
};

struct DistanceBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Thrown when an estimate has no matched vertices to average over.
class DegenerateEstimate : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Realized vertex count for a density over a volume: nearest integer, at least 1.
int vertex_count(double density, double volume);

/// Probabilities P(1..m) that a random demand vertex is matched to its k-th
/// nearest supply vertex. Index 0 holds k = 1.
std::vector<double> match_rank_distribution(int m_count, int n_count);

double match_rank_prob(int k, int m_count, int n_count);

/// E[X_k^order] for the k-th nearest of n_count uniform points in a ball of radius radius_v.
double kth_nearest_moment(int k, int n_count, double order, const SpaceSpec& space,
                          double radius_v);

/// Approximate CDF of the optimal matching distance, 0 <= x <= R_V.
double matching_distance_cdf(double x, const LocalProfile& profile, const SpaceSpec& space);

/// Expected matching distance without a radius, summed over nearest-neighbour ranks.
double expected_distance_scaled(const LocalProfile& profile, const SpaceSpec& space);

/// Polylogarithm simplification of expected_distance_scaled.
double expected_distance_polylog(const LocalProfile& profile, const SpaceSpec& space);

/// Integral bounds sandwiching expected_distance_polylog.
DistanceBounds distance_bounds(const LocalProfile& profile, const SpaceSpec& space);

/// (1/x - 1) Li_{-1/D}(x), the summand of the polylogarithm estimate; limit 1 at x = 0.
double polylog_summand(double x, int dim);

double match_probability(const LocalProfile& profile, const SpaceSpec& space);
double truncated_moment(const LocalProfile& profile, const SpaceSpec& space, double order);
double truncated_distance(const LocalProfile& profile, const SpaceSpec& space);
double truncated_variance(const LocalProfile& profile, const SpaceSpec& space);

/// Probability, mean and variance in one pass. Throws DegenerateEstimate if p < 1e-9.
DistanceMoments local_moments(const LocalProfile& profile, const SpaceSpec& space);

/// Rank-mixture sums at integer counts. `first` and `second` are the truncated
/// first and second moments of X / R_V; they are meaningful only when
/// probability > 0.
struct TruncatedSums {
  double probability = 0.0;
  double first = 0.0;
  double second = 0.0;
};

TruncatedSums truncated_sums(int m_count, int n_count, double radius, int dim);

inline constexpr double kMinMatchProbability = 1e-9;

}  // namespace rbmp
