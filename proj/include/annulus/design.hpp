#pragma once

#include "annulus/types.hpp"

#include <span>
#include <vector>

namespace annulus {

/// N x (2k+1) circumferential basis sampled at the rake angles. Column 0 is the
/// constant term; columns 2i+1 / 2i+2 hold sin / cos of omega_i * theta.
struct FourierDesign {
  Matrix matrix;
  HarmonicSet harmonics;
  std::vector<double> thetas_deg;
  /// Empty for the plain design. When set, row i of `matrix` has been scaled by row_weights[i].
  std::vector<double> row_weights;

  Eigen::Index rows() const { return matrix.rows(); }
  Eigen::Index cols() const { return matrix.cols(); }
};

/// M x (degree+1) monomial basis at the probe radii: column j holds r^j.
struct RadialDesign {
  Matrix matrix;
  int degree = 2;
};

/// sin and cos of an angle given in degrees. Multiples of 90 deg come out exact
/// (sin 180 deg == 0), and theta, theta + 360 give identical results when theta + 360 is exact.
struct SinCos {
  double sin;
  double cos;
};
SinCos sincos_degrees(double degrees);

/// Throws InvalidGeometry for an empty list or repeated angles.
FourierDesign build_fourier_design(std::span<const double> thetas_deg, const HarmonicSet& harmonics);

/// The design row a(theta) for a single angle; bitwise equal to the matching
/// row of build_fourier_design.
Vector fourier_row(double theta_deg, const HarmonicSet& harmonics);

/// Radii are used as given (no normalization); callers wanting better-conditioned
/// columns can map the span to [0, 1] first. Warns when there are fewer probes than
/// polynomial coefficients.
RadialDesign build_vandermonde(std::span<const double> radii, int degree);

/// Monomial row v(r) = (1, r, ..., r^degree).
Vector monomial_row(double r, int degree);

}  // namespace annulus
