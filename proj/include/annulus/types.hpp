#pragma once

#include <Eigen/Dense>

#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace annulus {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Distinct positive integer circumferential frequencies, kept in ascending order
/// so that design-matrix columns do not depend on the order the caller listed them.
class HarmonicSet {
 public:
  /// Throws InvalidArgument for an empty list, a frequency < 1, or a repeated frequency.
  explicit HarmonicSet(std::vector<int> omegas);
  HarmonicSet(std::initializer_list<int> omegas) : HarmonicSet(std::vector<int>(omegas)) {}

  std::size_t size() const noexcept { return omegas_.size(); }
  /// Number of Fourier columns: one constant plus a sin/cos pair per harmonic.
  std::size_t columns() const noexcept { return 2 * omegas_.size() + 1; }
  int operator[](std::size_t i) const { return omegas_[i]; }
  int max() const noexcept { return omegas_.back(); }
  const std::vector<int>& values() const noexcept { return omegas_; }

  /// Comma separated, e.g. "1,4".
  std::string to_string() const;

  friend bool operator==(const HarmonicSet&, const HarmonicSet&) = default;
  friend auto operator<=>(const HarmonicSet& a, const HarmonicSet& b) {
    return a.omegas_ <=> b.omegas_;
  }

 private:
  std::vector<int> omegas_;
};

struct AnnulusGeometry {
  double r_inner = 0.0;  ///< hub radius [m]
  double r_outer = 1.0;  ///< casing radius [m]

  /// Throws InvalidGeometry unless 0 <= r_inner < r_outer (both finite).
  void validate() const;
  double area() const;
  bool contains(double r) const { return r >= r_inner && r <= r_outer; }
};

/// N rakes x M probes. Angles in degrees on [0, 360), radii strictly increasing,
/// values in Kelvin with one row per rake and one column per probe.
class MeasurementGrid {
 public:
  /// Throws InvalidGeometry (angles/radii) or InvalidArgument (shape, non-finite values).
  MeasurementGrid(std::vector<double> thetas_deg, std::vector<double> radii, Matrix values);

  std::size_t rakes() const noexcept { return thetas_.size(); }
  std::size_t probes() const noexcept { return radii_.size(); }
  const std::vector<double>& thetas() const noexcept { return thetas_; }
  const std::vector<double>& radii() const noexcept { return radii_; }
  const Matrix& values() const noexcept { return values_; }

  /// Grid restricted to the listed rakes, in the order given.
  MeasurementGrid select_rakes(std::span<const std::size_t> rows) const;

 private:
  std::vector<double> thetas_;
  std::vector<double> radii_;
  Matrix values_;
};

/// Throws InvalidGeometry if any two angles coincide or an angle is not finite.
void require_distinct_angles(std::span<const double> thetas_deg);

/// Throws InvalidGeometry unless the radii are finite and strictly increasing.
void require_increasing_radii(std::span<const double> radii);

}  // namespace annulus
