#include "annulus/types.hpp"

#include "annulus/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace annulus {

FileError::FileError(const std::string& kind, const std::string& message, std::size_t line,
                     std::string field)
    : Error(kind + " error" + (line ? " at line " + std::to_string(line) : std::string{}) +
            (field.empty() ? std::string{} : " [" + field + "]") + ": " + message),
      kind_(kind),
      line_(line),
      field_(std::move(field)) {}

HarmonicSet::HarmonicSet(std::vector<int> omegas) : omegas_(std::move(omegas)) {
  if (omegas_.empty()) throw InvalidArgument("harmonic set must contain at least one frequency");
  std::sort(omegas_.begin(), omegas_.end());
  if (omegas_.front() < 1) {
    throw InvalidArgument("harmonic frequencies must be positive integers, got " +
                          std::to_string(omegas_.front()));
  }
  if (auto dup = std::adjacent_find(omegas_.begin(), omegas_.end()); dup != omegas_.end()) {
    throw InvalidArgument("harmonic frequency " + std::to_string(*dup) + " listed twice");
  }
}

std::string HarmonicSet::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < omegas_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(omegas_[i]);
  }
  return out;
}

void AnnulusGeometry::validate() const {
  if (!std::isfinite(r_inner) || !std::isfinite(r_outer) || r_inner < 0.0 || r_inner >= r_outer) {
    std::ostringstream os;
    os << "annulus requires 0 <= r_inner < r_outer, got r_inner=" << r_inner
       << " r_outer=" << r_outer;
    throw InvalidGeometry(os.str());
  }
}

double AnnulusGeometry::area() const {
  return std::numbers::pi * (r_outer * r_outer - r_inner * r_inner);
}

void require_distinct_angles(std::span<const double> thetas_deg) {
  for (std::size_t i = 0; i < thetas_deg.size(); ++i) {
    if (!std::isfinite(thetas_deg[i])) {
      throw InvalidGeometry("rake angle " + std::to_string(i) + " is not finite");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (thetas_deg[i] == thetas_deg[j]) {
        std::ostringstream os;
        os << "rake angles " << j << " and " << i << " coincide (" << thetas_deg[i] << " deg)";
        throw InvalidGeometry(os.str());
      }
    }
  }
}

void require_increasing_radii(std::span<const double> radii) {
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!std::isfinite(radii[i])) {
      throw InvalidGeometry("probe radius " + std::to_string(i) + " is not finite");
    }
    if (i > 0 && !(radii[i] > radii[i - 1])) {
      std::ostringstream os;
      os << "probe radii must be strictly increasing: r[" << i - 1 << "]=" << radii[i - 1]
         << " r[" << i << "]=" << radii[i];
      throw InvalidGeometry(os.str());
    }
  }
}

MeasurementGrid::MeasurementGrid(std::vector<double> thetas_deg, std::vector<double> radii,
                                 Matrix values)
    : thetas_(std::move(thetas_deg)), radii_(std::move(radii)), values_(std::move(values)) {
  if (thetas_.empty()) throw InvalidGeometry("measurement grid needs at least one rake");
  if (radii_.empty()) throw InvalidGeometry("measurement grid needs at least one probe");
  require_distinct_angles(thetas_);
  for (double t : thetas_) {
    if (t < 0.0 || t >= 360.0) {
      std::ostringstream os;
      os << "rake angle " << t << " deg outside [0, 360)";
      throw InvalidGeometry(os.str());
    }
  }
  require_increasing_radii(radii_);
  if (static_cast<std::size_t>(values_.rows()) != thetas_.size() ||
      static_cast<std::size_t>(values_.cols()) != radii_.size()) {
    std::ostringstream os;
    os << "value matrix is " << values_.rows() << "x" << values_.cols() << ", expected "
       << thetas_.size() << "x" << radii_.size();
    throw InvalidArgument(os.str());
  }
  if (!values_.allFinite()) throw InvalidArgument("measurement values must be finite");
}

MeasurementGrid MeasurementGrid::select_rakes(std::span<const std::size_t> rows) const {
  std::vector<double> thetas;
  Matrix values(static_cast<Eigen::Index>(rows.size()), values_.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    thetas.push_back(thetas_.at(rows[i]));
    values.row(static_cast<Eigen::Index>(i)) = values_.row(static_cast<Eigen::Index>(rows[i]));
  }
  return MeasurementGrid(std::move(thetas), radii_, std::move(values));
}

}  // namespace annulus
