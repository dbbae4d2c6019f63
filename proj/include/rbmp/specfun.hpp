#pragma once

// Scalar special functions shared by the estimators.

namespace rbmp {

/// Geometry of the matching space: dimension and L^p norm exponent.
struct SpaceSpec {
  int dim = 2;
  double norm_p = 2.0;

  void validate() const;
};

double ln_gamma(double x);

/// ln B(a, b) computed from ln_gamma differences.
double ln_beta(double a, double b);

/// Non-regularized incomplete beta B(z; a, b) = int_0^z t^{a-1} (1-t)^{b-1} dt.
double inc_beta(double z, double a, double b);

/// ln B(z; a, b); returns -inf at z == 0. Stays finite where inc_beta underflows.
double ln_inc_beta(double z, double a, double b);

/// Regularized incomplete beta I_z(a, b) in [0, 1].
double reg_inc_beta(double z, double a, double b);

/// Li_s(x) = sum_{k>=1} x^k / k^s for s in [-1, 0) and x in [0, 1).
double polylog_neg(double s, double x);

double std_normal_pdf(double x);
double std_normal_cdf(double x);

/// Radius of the unit-volume L^p ball in `space.dim` dimensions.
double hyperball_radius(const SpaceSpec& space);

/// Radius of the L^p ball with the given volume.
double ball_radius(const SpaceSpec& space, double volume);

}  // namespace rbmp
