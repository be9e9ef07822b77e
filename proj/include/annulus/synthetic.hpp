#pragma once

#include "annulus/types.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace annulus {

/// One circumferential mode amp(s) * cos(omega * theta - phase(s)), where amp and
/// phase are polynomials (ascending powers) in the normalized span
/// s = (r - r_inner) / (r_outer - r_inner).
struct ProfileHarmonic {
  int omega = 1;
  std::vector<double> amplitude;  ///< [K]
  std::vector<double> phase;      ///< [rad]
};

struct SyntheticProfileSpec {
  double mean_level = 0.0;  ///< [K]
  std::vector<ProfileHarmonic> harmonics;
  AnnulusGeometry annulus;
  double noise_std = 0.0;  ///< Gaussian measurement noise [K]

  /// Throws InvalidArgument for repeated / non-positive frequencies, non-finite
  /// coefficients or negative noise; InvalidGeometry for a bad annulus.
  void validate() const;
};

enum class RakeCase { I, II, III, IV };

/// Four-harmonic reference profile with modes 1, 4, 19 and 49 whose amplitudes and
/// phases vary linearly from hub to casing, mean 526.85 K, annulus 0.5 m .. 1.0 m.
SyntheticProfileSpec canonical_profile();

/// Rake angles of the four virtual layouts.
std::vector<double> rake_case_angles(RakeCase which);
/// Parses "I".."IV" (case-insensitive). Throws InvalidArgument otherwise.
RakeCase parse_rake_case(std::string_view text);

/// Rake angles of engines A-E. Throws InvalidArgument for other letters.
std::vector<double> engine_rake_angles(char engine);

/// `count` probes at the centres of equal-width spanwise bands.
std::vector<double> equal_span_radii(const AnnulusGeometry& annulus, std::size_t count = 7);

double profile_value(const SyntheticProfileSpec& spec, double r, double theta_deg);

/// Samples the profile at every (rake, probe) and adds seeded Gaussian noise when
/// spec.noise_std > 0. The generator is local to the call.
MeasurementGrid sample_onto_rakes(const SyntheticProfileSpec& spec, std::vector<double> thetas_deg,
                                  std::vector<double> radii, std::uint64_t seed = 0);

}  // namespace annulus
