#include "rbmp/homogeneous.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <string>

namespace rbmp {

namespace {

void check_counts(int m_count, int n_count) {
  if (m_count < 1 || n_count < m_count) {
    throw std::domain_error("vertex counts must satisfy 1 <= m <= n (got m=" +
                            std::to_string(m_count) + ", n=" + std::to_string(n_count) + ")");
  }
}

// I_x(k + shift, n - k + 1) for k = 1..m, by downward recurrence from k = m.
// The recurrence adds positive terms, so it is stable; entries that fall below
// the underflow guard are recomputed in log space by the caller.
std::vector<double> shifted_beta_column(int m_count, int n_count, double x, double shift) {
  std::vector<double> column(m_count + 1, 0.0);
  if (x <= 0.0) return column;
  if (x >= 1.0) {
    std::fill(column.begin() + 1, column.end(), 1.0);
    return column;
  }
  const double n = n_count;
  const double lx = std::log(x);
  const double l1x = std::log1p(-x);
  const double lg_top = std::lgamma(n + 1.0 + shift);
  column[m_count] = reg_inc_beta(x, m_count + shift, n - m_count + 1.0);
  for (int k = m_count - 1; k >= 1; --k) {
    const double a = k + shift;
    const double log_term =
        a * lx + (n - k) * l1x + lg_top - std::lgamma(a + 1.0) - std::lgamma(n - k + 1.0);
    column[k] = std::min(1.0, column[k + 1] + std::exp(log_term));
  }
  return column;
}

// B(x; k + shift, b) / B(x; k, b) for one rank, in log space.
double log_space_ratio(double x, int k, int n_count, double shift) {
  const double b = n_count - k + 1.0;
  const double num = ln_inc_beta(x, k + shift, b);
  const double den = ln_inc_beta(x, k, b);
  if (!std::isfinite(den)) return 0.0;
  return std::exp(num - den);
}

constexpr double kUnderflowGuard = 1e-250;

}  // namespace

void LocalProfile::validate() const {
  if (!(demand > 0.0)) throw std::domain_error("LocalProfile: demand density must be positive");
  if (!(supply >= demand)) throw std::domain_error("LocalProfile: supply density must be >= demand");
  if (!(radius >= 0.0 && radius <= 1.0)) throw std::domain_error("LocalProfile: radius must lie in [0, 1]");
  if (!(volume > 0.0)) throw std::domain_error("LocalProfile: volume must be positive");
}

int LocalProfile::demand_count() const { return vertex_count(demand, volume); }
int LocalProfile::supply_count() const { return vertex_count(supply, volume); }

int vertex_count(double density, double volume) {
  const double raw = density * volume;
  if (!std::isfinite(raw) || raw < 0.0) throw std::domain_error("vertex_count: invalid density");
  const long long rounded = std::llround(raw);
  return static_cast<int>(std::max<long long>(1, rounded));
}

std::vector<double> match_rank_distribution(int m_count, int n_count) {
  check_counts(m_count, n_count);
  std::vector<double> prob(m_count, 0.0);
  const double n = n_count;
  for (int i = 1; i <= m_count; ++i) {
    const double q = (i - 1) / n;
    double power = 1.0;  // q^{k-1}, with 0^0 = 1
    for (int k = 1; k < i; ++k) {
      prob[k - 1] += power * (1.0 - q);
      power *= q;
    }
    prob[i - 1] += power;
  }
  for (double& v : prob) v /= m_count;
  return prob;
}

double match_rank_prob(int k, int m_count, int n_count) {
  check_counts(m_count, n_count);
  if (k < 1 || k > m_count) throw std::domain_error("match_rank_prob: need 1 <= k <= m");
  return match_rank_distribution(m_count, n_count)[k - 1];
}

double kth_nearest_moment(int k, int n_count, double order, const SpaceSpec& space,
                          double radius_v) {
  space.validate();
  if (k < 1 || k > n_count) throw std::domain_error("kth_nearest_moment: need 1 <= k <= n");
  if (!(order > 0.0)) throw std::domain_error("kth_nearest_moment: order must be positive");
  const double a = order / space.dim;
  const double n = n_count;
  return std::pow(radius_v, order) *
         std::exp(ln_gamma(n + 1.0) - ln_gamma(n + 1.0 + a) + ln_gamma(k + a) - ln_gamma(k));
}

TruncatedSums truncated_sums(int m_count, int n_count, double radius, int dim) {
  check_counts(m_count, n_count);
  if (!(radius >= 0.0 && radius <= 1.0)) throw std::domain_error("truncated_sums: radius must lie in [0, 1]");
  TruncatedSums out;
  if (radius == 0.0) return out;
  const double x = std::pow(radius, dim);
  const double shift1 = 1.0 / dim;
  const double shift2 = 2.0 / dim;
  const auto prob = match_rank_distribution(m_count, n_count);
  const auto base = shifted_beta_column(m_count, n_count, x, 0.0);
  const auto col1 = shifted_beta_column(m_count, n_count, x, shift1);
  const auto col2 = shifted_beta_column(m_count, n_count, x, shift2);
  const double n = n_count;
  const double lg_n1 = std::lgamma(n + 1.0);
  const double lg_n1a = std::lgamma(n + 1.0 + shift1);
  const double lg_n1b = std::lgamma(n + 1.0 + shift2);
  for (int k = 1; k <= m_count; ++k) {
    const double w = prob[k - 1];
    out.probability += w * base[k];
    if (w == 0.0) continue;
    double r1 = 0.0;
    double r2 = 0.0;
    if (base[k] > kUnderflowGuard) {
      const double lgk = std::lgamma(static_cast<double>(k));
      r1 = col1[k] / base[k] * std::exp(std::lgamma(k + shift1) - lgk + lg_n1 - lg_n1a);
      r2 = col2[k] / base[k] * std::exp(std::lgamma(k + shift2) - lgk + lg_n1 - lg_n1b);
    } else {
      r1 = log_space_ratio(x, k, n_count, shift1);
      r2 = log_space_ratio(x, k, n_count, shift2);
    }
    out.first += w * r1;
    out.second += w * r2;
  }
  out.probability = std::min(1.0, out.probability);
  return out;
}

double matching_distance_cdf(double x, const LocalProfile& profile, const SpaceSpec& space) {
  profile.validate();
  space.validate();
  const double radius_v = ball_radius(space, profile.volume);
  if (!(x >= 0.0 && x <= radius_v * (1.0 + 1e-12))) {
    throw std::domain_error("matching_distance_cdf: need 0 <= x <= R_V");
  }
  x = std::min(x, radius_v);
  const int m = profile.demand_count();
  const int n = profile.supply_count();
  const auto prob = match_rank_distribution(m, n);
  const auto col = shifted_beta_column(m, n, std::pow(x / radius_v, space.dim), 0.0);
  double cdf = 0.0;
  for (int k = 1; k <= m; ++k) cdf += prob[k - 1] * col[k];
  return std::min(1.0, cdf);
}

double expected_distance_scaled(const LocalProfile& profile, const SpaceSpec& space) {
  profile.validate();
  space.validate();
  const int m = profile.demand_count();
  const int n = profile.supply_count();
  const double radius_v = ball_radius(space, profile.volume);
  const auto prob = match_rank_distribution(m, n);
  double sum = 0.0;
  for (int k = 1; k <= m; ++k) sum += prob[k - 1] * kth_nearest_moment(k, n, 1.0, space, radius_v);
  return sum;
}

double polylog_summand(double x, int dim) {
  if (x == 0.0) return 1.0;
  return (1.0 / x - 1.0) * polylog_neg(-1.0 / dim, x);
}

double expected_distance_polylog(const LocalProfile& profile, const SpaceSpec& space) {
  profile.validate();
  space.validate();
  const int m = profile.demand_count();
  const int n = profile.supply_count();
  if (m - 1 >= n) throw std::domain_error("expected_distance_polylog: need (mV - 1) / nV < 1");
  const double prefactor = hyperball_radius(space) /
                           (profile.demand * std::pow(profile.supply, 1.0 / space.dim) * profile.volume);
  double sum = 1.0;
  for (int i = 2; i <= m; ++i) sum += polylog_summand((i - 1.0) / n, space.dim);
  return prefactor * sum;
}

DistanceBounds distance_bounds(const LocalProfile& profile, const SpaceSpec& space) {
  profile.validate();
  space.validate();
  const int m = profile.demand_count();
  const int n = profile.supply_count();
  if (m >= n) throw std::domain_error("distance_bounds: integration requires m / n < 1");
  const int dim = space.dim;
  auto integrand = [dim](double x) { return polylog_summand(x, dim); };
  using Quadrature = boost::math::quadrature::gauss_kronrod<double, 15>;
  auto integrate = [&](double upper) {
    if (upper <= 0.0) return 0.0;
    return Quadrature::integrate(integrand, 0.0, upper, 20, 1e-8);
  };
  // Counts enter through x = (i - 1) / nV; this equals the density form when
  // mV and nV are integers.
  const double prefactor = hyperball_radius(space) * n /
                           (profile.demand * std::pow(profile.supply, 1.0 / dim) * profile.volume);
  DistanceBounds out;
  out.lower = prefactor * integrate((m - 1.0) / n);
  out.upper = prefactor * integrate(static_cast<double>(m) / n);
  return out;
}

double match_probability(const LocalProfile& profile, const SpaceSpec& space) {
  profile.validate();
  space.validate();
  return truncated_sums(profile.demand_count(), profile.supply_count(), profile.radius, space.dim)
      .probability;
}

double truncated_moment(const LocalProfile& profile, const SpaceSpec& space, double order) {
  profile.validate();
  space.validate();
  if (!(order > 0.0)) throw std::domain_error("truncated_moment: order must be positive");
  const int m = profile.demand_count();
  const int n = profile.supply_count();
  const double radius_v = ball_radius(space, profile.volume);
  if (profile.radius == 0.0) throw DegenerateEstimate("truncated_moment: zero radius admits no matches");
  const double x = std::pow(profile.radius, space.dim);
  const auto prob = match_rank_distribution(m, n);
  const auto base = shifted_beta_column(m, n, x, 0.0);
  double p = 0.0;
  for (int k = 1; k <= m; ++k) p += prob[k - 1] * base[k];
  if (p < kMinMatchProbability) throw DegenerateEstimate("truncated_moment: match probability below 1e-9");
  const double shift = order / space.dim;
  const auto shifted = shifted_beta_column(m, n, x, shift);
  double sum = 0.0;
  for (int k = 1; k <= m; ++k) {
    double ratio;
    if (base[k] > kUnderflowGuard) {
      ratio = shifted[k] / base[k] *
              std::exp(std::lgamma(k + shift) - std::lgamma(static_cast<double>(k)) +
                       std::lgamma(n + 1.0) - std::lgamma(n + 1.0 + shift));
    } else {
      ratio = log_space_ratio(x, k, n, shift);
    }
    sum += prob[k - 1] * ratio;
  }
  return std::pow(radius_v, order) * sum;
}

double truncated_distance(const LocalProfile& profile, const SpaceSpec& space) {
  return truncated_moment(profile, space, 1.0);
}

double truncated_variance(const LocalProfile& profile, const SpaceSpec& space) {
  return local_moments(profile, space).variance;
}

DistanceMoments local_moments(const LocalProfile& profile, const SpaceSpec& space) {
  profile.validate();
  space.validate();
  const auto sums = truncated_sums(profile.demand_count(), profile.supply_count(), profile.radius, space.dim);
  if (sums.probability < kMinMatchProbability) {
    throw DegenerateEstimate("local_moments: match probability below 1e-9");
  }
  const double radius_v = ball_radius(space, profile.volume);
  DistanceMoments out;
  out.match_probability = sums.probability;
  out.mean = radius_v * sums.first;
  out.variance = std::max(0.0, radius_v * radius_v * (sums.second - sums.first * sums.first));
  return out;
}

}  // namespace rbmp
