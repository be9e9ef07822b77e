#include "annulus/design.hpp"

#include "annulus/errors.hpp"
#include "annulus/log.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace annulus {

SinCos sincos_degrees(double degrees) {
  double r = std::fmod(degrees, 360.0);
  const double quadrant = std::round(r / 90.0);
  r -= 90.0 * quadrant;
  r *= std::numbers::pi / 180.0;
  const double s = std::sin(r);
  const double c = std::cos(r);
  SinCos out{};
  switch (static_cast<unsigned>(static_cast<int>(quadrant)) & 3u) {
    case 0: out = {s, c}; break;
    case 1: out = {c, -s}; break;
    case 2: out = {-s, -c}; break;
    default: out = {-c, s}; break;
  }
  // no negative zeros
  out.sin += 0.0;
  out.cos += 0.0;
  return out;
}

namespace {

void fill_row(double theta_deg, const HarmonicSet& harmonics, double* row, Eigen::Index stride) {
  const double reduced = std::fmod(theta_deg, 360.0);
  row[0] = 1.0;
  for (std::size_t i = 0; i < harmonics.size(); ++i) {
    const auto sc = sincos_degrees(static_cast<double>(harmonics[i]) * reduced);
    row[(2 * i + 1) * stride] = sc.sin;
    row[(2 * i + 2) * stride] = sc.cos;
  }
}

}  // namespace

FourierDesign build_fourier_design(std::span<const double> thetas_deg,
                                   const HarmonicSet& harmonics) {
  if (thetas_deg.empty()) throw InvalidGeometry("Fourier design needs at least one rake angle");
  require_distinct_angles(thetas_deg);
  const auto n = static_cast<Eigen::Index>(thetas_deg.size());
  Matrix a(n, static_cast<Eigen::Index>(harmonics.columns()));
  for (Eigen::Index i = 0; i < n; ++i) {
    // column-major storage: consecutive columns of row i are n apart
    fill_row(thetas_deg[static_cast<std::size_t>(i)], harmonics, a.data() + i, n);
  }
  return FourierDesign{std::move(a), harmonics,
                       std::vector<double>(thetas_deg.begin(), thetas_deg.end()), {}};
}

Vector fourier_row(double theta_deg, const HarmonicSet& harmonics) {
  Vector row(static_cast<Eigen::Index>(harmonics.columns()));
  fill_row(theta_deg, harmonics, row.data(), 1);
  return row;
}

RadialDesign build_vandermonde(std::span<const double> radii, int degree) {
  if (degree < 0) throw InvalidArgument("polynomial degree must be >= 0");
  if (radii.empty()) throw InvalidGeometry("Vandermonde matrix needs at least one radius");
  require_increasing_radii(radii);
  if (radii.size() < static_cast<std::size_t>(degree) + 1) {
    log::warn("only " + std::to_string(radii.size()) + " probe radii for a degree-" +
              std::to_string(degree) + " radial polynomial; the radial fit is underdetermined");
  }
  const auto m = static_cast<Eigen::Index>(radii.size());
  Matrix v(m, degree + 1);
  for (Eigen::Index i = 0; i < m; ++i) {
    v.row(i) = monomial_row(radii[static_cast<std::size_t>(i)], degree).transpose();
  }
  return RadialDesign{std::move(v), degree};
}

Vector monomial_row(double r, int degree) {
  Vector v(degree + 1);
  double power = 1.0;
  for (int j = 0; j <= degree; ++j) {
    v(j) = power;
    power *= r;
  }
  return v;
}

}  // namespace annulus
