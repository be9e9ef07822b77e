#pragma once

#include "annulus/design.hpp"
#include "annulus/selection.hpp"
#include "annulus/solvers.hpp"
#include "annulus/types.hpp"

#include <vector>

namespace annulus {

/// Fourier coefficients fused with a radial polynomial least-squares fit:
/// T(r, theta) = v(r)^T U X^T a(theta) with U = (V^T V)^{-1} V^T.
/// Immutable after construction.
class SpatialModel {
 public:
  /// `radii` are the probe radii the coefficient columns belong to. When V is
  /// rank deficient (fewer probes than coefficients) U is its pseudo-inverse.
  SpatialModel(CoefficientMatrix coefficients, std::vector<double> radii, int degree,
               AnnulusGeometry annulus);

  /// Temperature at (r, theta_deg). Radii outside the annulus are extrapolated with a warning.
  double evaluate(double r, double theta_deg) const;

  const HarmonicSet& harmonics() const noexcept { return coefficients_.harmonics; }
  const CoefficientMatrix& coefficients() const noexcept { return coefficients_; }
  const RadialDesign& radial_design() const noexcept { return radial_; }
  /// p x M radial map U.
  const Matrix& radial_map() const noexcept { return radial_map_; }
  const AnnulusGeometry& annulus() const noexcept { return annulus_; }
  const std::vector<double>& radii() const noexcept { return radii_; }
  int degree() const noexcept { return radial_.degree; }

  /// Polynomial coefficients (ascending powers of r) of the constant Fourier term.
  Vector mean_profile_polynomial() const;

 private:
  CoefficientMatrix coefficients_;
  std::vector<double> radii_;
  RadialDesign radial_;
  Matrix radial_map_;
  Matrix fused_;  // p x (2k+1), U X^T
  AnnulusGeometry annulus_;
};

/// Closed-form area average. Only the constant Fourier row survives the theta
/// integral; the radial integral uses exact monomial moments.
double area_average_analytic(const SpatialModel& model);

/// Sector area of every probe: circumferential extent from the bisectors to the
/// neighbouring rakes (wrapping at 360 deg) times the radial band between probe
/// midpoints, clipped to the annulus. N x M, sums to the annulus area.
Matrix sector_areas(std::span<const double> thetas_deg, std::span<const double> radii,
                    const AnnulusGeometry& annulus);

/// Measurements weighted by their sector areas.
double area_average_weighted(const MeasurementGrid& grid, const AnnulusGeometry& annulus);

/// Plain mean of all N x M measurements.
double numeric_average(const MeasurementGrid& grid);

struct FittedModel {
  SpatialModel model;
  FitReport report;
};

/// Circumferential fit with algorithm1_fit followed by the radial polynomial of `degree`.
FittedModel fit_spatial_model(const MeasurementGrid& grid, const AnnulusGeometry& annulus,
                              const HarmonicSet& harmonics, const ScanConfig& config = {},
                              int degree = 2);

}  // namespace annulus
