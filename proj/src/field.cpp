#include "annulus/field.hpp"

#include "annulus/errors.hpp"
#include "annulus/log.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace annulus {

SpatialModel::SpatialModel(CoefficientMatrix coefficients, std::vector<double> radii, int degree,
                           AnnulusGeometry annulus)
    : coefficients_(std::move(coefficients)),
      radii_(std::move(radii)),
      radial_(build_vandermonde(radii_, degree)),
      annulus_(annulus) {
  annulus_.validate();
  if (static_cast<std::size_t>(coefficients_.matrix.cols()) != radii_.size()) {
    throw InvalidArgument("coefficient matrix needs one column per probe radius");
  }
  if (static_cast<std::size_t>(coefficients_.matrix.rows()) != coefficients_.harmonics.columns()) {
    throw InvalidArgument("coefficient matrix row count does not match the harmonic set");
  }
  if (!coefficients_.matrix.allFinite()) throw InvalidArgument("coefficients must be finite");
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(radial_.matrix);
  radial_map_ = cod.pseudoInverse();
  fused_ = radial_map_ * coefficients_.matrix.transpose();
}

double SpatialModel::evaluate(double r, double theta_deg) const {
  if (!annulus_.contains(r)) {
    std::ostringstream os;
    os << "extrapolating to r=" << r << " outside the annulus [" << annulus_.r_inner << ", "
       << annulus_.r_outer << "]";
    log::warn(os.str());
  }
  const Vector v = monomial_row(r, radial_.degree);
  const Vector a = fourier_row(theta_deg, coefficients_.harmonics);
  return v.dot(fused_ * a);
}

Vector SpatialModel::mean_profile_polynomial() const {
  return radial_map_ * coefficients_.matrix.row(0).transpose();
}

double area_average_analytic(const SpatialModel& model) {
  const auto& g = model.annulus();
  const Vector c = model.mean_profile_polynomial();
  // (2 / (ro^2 - ri^2)) * sum_j c_j * (ro^{j+2} - ri^{j+2}) / (j + 2)
  double integral = 0.0;
  for (Eigen::Index j = 0; j < c.size(); ++j) {
    const double e = static_cast<double>(j + 2);
    integral += c(j) * (std::pow(g.r_outer, e) - std::pow(g.r_inner, e)) / e;
  }
  return 2.0 * integral / (g.r_outer * g.r_outer - g.r_inner * g.r_inner);
}

Matrix sector_areas(std::span<const double> thetas_deg, std::span<const double> radii,
                    const AnnulusGeometry& annulus) {
  annulus.validate();
  if (thetas_deg.empty() || radii.empty()) throw InvalidGeometry("sector weights need N, M >= 1");
  require_distinct_angles(thetas_deg);
  require_increasing_radii(radii);
  const std::size_t n = thetas_deg.size();
  const std::size_t m = radii.size();

  std::vector<double> wrapped(n);
  for (std::size_t i = 0; i < n; ++i) {
    wrapped[i] = std::fmod(thetas_deg[i], 360.0);
    if (wrapped[i] < 0.0) wrapped[i] += 360.0;
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return wrapped[a] < wrapped[b]; });

  // Circumferential extent [deg]: half the gap to each neighbour.
  std::vector<double> extent(n, 360.0);
  if (n > 1) {
    for (std::size_t s = 0; s < n; ++s) {
      const double prev = s == 0 ? wrapped[order[n - 1]] - 360.0 : wrapped[order[s - 1]];
      const double next = s == n - 1 ? wrapped[order[0]] + 360.0 : wrapped[order[s + 1]];
      extent[order[s]] = 0.5 * (next - prev);
    }
  }

  std::vector<double> edges(m + 1);
  edges.front() = annulus.r_inner;
  edges.back() = annulus.r_outer;
  for (std::size_t j = 1; j < m; ++j) edges[j] = 0.5 * (radii[j - 1] + radii[j]);
  for (auto& e : edges) e = std::clamp(e, annulus.r_inner, annulus.r_outer);

  Matrix areas(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < n; ++i) {
    const double half_angle = 0.5 * extent[i] * std::numbers::pi / 180.0;
    for (std::size_t j = 0; j < m; ++j) {
      areas(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          half_angle * (edges[j + 1] * edges[j + 1] - edges[j] * edges[j]);
    }
  }
  return areas;
}

double area_average_weighted(const MeasurementGrid& grid, const AnnulusGeometry& annulus) {
  const Matrix w = sector_areas(grid.thetas(), grid.radii(), annulus);
  const double total = w.sum();
  if (!(total > 0.0)) throw InvalidGeometry("sector areas sum to zero");
  return w.cwiseProduct(grid.values()).sum() / total;
}

double numeric_average(const MeasurementGrid& grid) { return grid.values().mean(); }

FittedModel fit_spatial_model(const MeasurementGrid& grid, const AnnulusGeometry& annulus,
                              const HarmonicSet& harmonics, const ScanConfig& config, int degree) {
  auto fit = algorithm1_fit(grid, harmonics, config);
  return FittedModel{SpatialModel(std::move(fit.coefficients), grid.radii(), degree, annulus),
                     fit.report};
}

}  // namespace annulus
