#include "rbmp/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rbmp {

namespace {

constexpr int kMaxContinuedFractionTerms = 10000;
constexpr double kFpMin = 1e-300;
constexpr double kEps = 1e-16;

void check_beta_args(double z, double a, double b) {
  if (!(z >= 0.0 && z <= 1.0) || !(a > 0.0) || !(b > 0.0)) {
    throw std::domain_error("incomplete beta: need 0 <= z <= 1, a > 0, b > 0 (got z=" +
                            std::to_string(z) + ", a=" + std::to_string(a) +
                            ", b=" + std::to_string(b) + ")");
  }
}

// Modified Lentz evaluation of the continued fraction for I_z(a, b); converges
// fast for z < (a + 1) / (a + b + 2).
double beta_continued_fraction(double z, double a, double b) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * z / qap;
  if (std::fabs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxContinuedFractionTerms; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * z / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * z / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw std::runtime_error("incomplete beta: continued fraction did not converge");
}

// ln of z^a (1-z)^b / a, the prefactor of the continued fraction.
double ln_front(double z, double a, double b) {
  return a * std::log(z) + b * std::log1p(-z) - std::log(a);
}

}  // namespace

void SpaceSpec::validate() const {
  if (dim < 1) throw std::domain_error("SpaceSpec: dimension must be >= 1");
  if (!(norm_p >= 1.0) || !std::isfinite(norm_p)) {
    throw std::domain_error("SpaceSpec: norm exponent must be finite and >= 1");
  }
}

double ln_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("ln_gamma: argument must be positive");
  return std::lgamma(x);
}

double ln_beta(double a, double b) { return ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b); }

double ln_inc_beta(double z, double a, double b) {
  check_beta_args(z, a, b);
  if (z == 0.0) return -std::numeric_limits<double>::infinity();
  const double full = ln_beta(a, b);
  if (z == 1.0) return full;
  if (z < (a + 1.0) / (a + b + 2.0)) {
    return ln_front(z, a, b) + std::log(beta_continued_fraction(z, a, b));
  }
  // Symmetry split: B(z; a, b) = B(a, b) - B(1 - z; b, a).
  const double tail = ln_front(1.0 - z, b, a) + std::log(beta_continued_fraction(1.0 - z, b, a));
  const double ratio = std::exp(tail - full);
  if (ratio >= 1.0) return -std::numeric_limits<double>::infinity();
  return full + std::log1p(-ratio);
}

double inc_beta(double z, double a, double b) { return std::exp(ln_inc_beta(z, a, b)); }

double reg_inc_beta(double z, double a, double b) {
  check_beta_args(z, a, b);
  if (z == 0.0) return 0.0;
  if (z == 1.0) return 1.0;
  if (z < (a + 1.0) / (a + b + 2.0)) {
    return std::exp(ln_front(z, a, b) - ln_beta(a, b)) * beta_continued_fraction(z, a, b);
  }
  return 1.0 - std::exp(ln_front(1.0 - z, b, a) - ln_beta(a, b)) *
                   beta_continued_fraction(1.0 - z, b, a);
}

double polylog_neg(double s, double x) {
  if (!(s >= -1.0 && s < 0.0)) throw std::domain_error("polylog_neg: need -1 <= s < 0");
  if (!(x >= 0.0 && x < 1.0)) throw std::domain_error("polylog_neg: need 0 <= x < 1");
  if (x == 0.0) return 0.0;
  double sum = 0.0;
  double power = 1.0;
  // k^{-s} x^k first rises then decays geometrically; stop only on the decaying side.
  const long long peak = static_cast<long long>(std::ceil(-s / -std::log(x))) + 1;
  for (long long k = 1;; ++k) {
    power *= x;
    const double term = power * std::pow(static_cast<double>(k), -s);
    sum += term;
    if (k > peak && term < 1e-14 * sum) break;
    if (power == 0.0) break;
  }
  return sum;
}

double std_normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double hyperball_radius(const SpaceSpec& space) {
  space.validate();
  const double d = space.dim;
  const double p = space.norm_p;
  return std::exp(ln_gamma(d / p + 1.0) / d) / (2.0 * std::exp(ln_gamma(1.0 / p + 1.0)));
}

double ball_radius(const SpaceSpec& space, double volume) {
  if (!(volume > 0.0)) throw std::domain_error("ball_radius: volume must be positive");
  return hyperball_radius(space) * std::pow(volume, 1.0 / space.dim);
}

}  // namespace rbmp
