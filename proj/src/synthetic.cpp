#include "annulus/synthetic.hpp"

#include "annulus/design.hpp"
#include "annulus/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <string>

namespace annulus {
namespace {

double polyval(const std::vector<double>& c, double s) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * s + *it;
  return acc;
}

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

void SyntheticProfileSpec::validate() const {
  annulus.validate();
  if (!std::isfinite(mean_level)) throw InvalidArgument("mean level must be finite");
  if (!(noise_std >= 0.0) || !std::isfinite(noise_std)) {
    throw InvalidArgument("noise standard deviation must be finite and >= 0");
  }
  std::set<int> seen;
  for (const auto& h : harmonics) {
    if (h.omega < 1) throw InvalidArgument("profile frequencies must be positive integers");
    if (!seen.insert(h.omega).second) {
      throw InvalidArgument("profile frequency " + std::to_string(h.omega) + " listed twice");
    }
    if (!all_finite(h.amplitude) || !all_finite(h.phase)) {
      throw InvalidArgument("profile amplitude/phase coefficients must be finite");
    }
  }
}

SyntheticProfileSpec canonical_profile() {
  using std::numbers::pi;
  SyntheticProfileSpec spec;
  spec.mean_level = 526.85;
  spec.annulus = AnnulusGeometry{0.5, 1.0};
  // hub -> casing: amplitude a0 -> a0 + a1, phase p0 -> p0 + p1
  spec.harmonics = {
      {1, {3.0, -1.0}, {0.0, pi / 6.0}},
      {4, {2.0, 1.0}, {pi / 4.0, pi / 3.0 - pi / 4.0}},
      {19, {0.1, -0.05}, {0.0, pi / 2.0}},
      {49, {0.05, 0.05}, {pi / 3.0, -pi / 3.0}},
  };
  return spec;
}

std::vector<double> rake_case_angles(RakeCase which) {
  switch (which) {
    case RakeCase::I: return {54, 90, 162, 234, 306, 342};
    case RakeCase::II: return {15, 45, 123, 190, 250, 316};
    case RakeCase::III: return {60, 114, 180, 250, 310, 351};
    case RakeCase::IV: return {0, 75, 150, 220, 250, 320};
  }
  throw InvalidArgument("unknown rake case");
}

RakeCase parse_rake_case(std::string_view text) {
  std::string upper(text);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (upper == "I") return RakeCase::I;
  if (upper == "II") return RakeCase::II;
  if (upper == "III") return RakeCase::III;
  if (upper == "IV") return RakeCase::IV;
  throw InvalidArgument("rake case must be one of I, II, III, IV; got '" + std::string(text) + "'");
}

std::vector<double> engine_rake_angles(char engine) {
  switch (std::toupper(static_cast<unsigned char>(engine))) {
    case 'A': return {54.0, 90.0, 162.0, 234.0, 270.0, 342.0};
    case 'B':
    case 'C':
    case 'D': return {54.0, 90.0, 162.0, 234.0, 306.0, 342.0};
    case 'E': return {18.75, 60.625, 140.0, 179.58, 219.375, 258.75, 298.75, 340.0};
    default: break;
  }
  throw InvalidArgument(std::string("unknown engine '") + engine + "'; expected A-E");
}

std::vector<double> equal_span_radii(const AnnulusGeometry& annulus, std::size_t count) {
  annulus.validate();
  if (count == 0) throw InvalidArgument("need at least one probe");
  std::vector<double> radii(count);
  const double span = annulus.r_outer - annulus.r_inner;
  for (std::size_t j = 0; j < count; ++j) {
    radii[j] = annulus.r_inner + span * (static_cast<double>(j) + 0.5) / static_cast<double>(count);
  }
  return radii;
}

double profile_value(const SyntheticProfileSpec& spec, double r, double theta_deg) {
  const double s = (r - spec.annulus.r_inner) / (spec.annulus.r_outer - spec.annulus.r_inner);
  const double theta = std::fmod(theta_deg, 360.0) * std::numbers::pi / 180.0;
  double value = spec.mean_level;
  for (const auto& h : spec.harmonics) {
    value += polyval(h.amplitude, s) *
             std::cos(static_cast<double>(h.omega) * theta - polyval(h.phase, s));
  }
  return value;
}

MeasurementGrid sample_onto_rakes(const SyntheticProfileSpec& spec, std::vector<double> thetas_deg,
                                  std::vector<double> radii, std::uint64_t seed) {
  spec.validate();
  Matrix values(static_cast<Eigen::Index>(thetas_deg.size()),
                static_cast<Eigen::Index>(radii.size()));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, spec.noise_std > 0.0 ? spec.noise_std : 1.0);
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      double v = profile_value(spec, radii[static_cast<std::size_t>(j)],
                               thetas_deg[static_cast<std::size_t>(i)]);
      if (spec.noise_std > 0.0) v += noise(rng);
      values(i, j) = v;
    }
  }
  return MeasurementGrid(std::move(thetas_deg), std::move(radii), std::move(values));
}

}  // namespace annulus
