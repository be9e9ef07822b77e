#pragma once

#include "annulus/solvers.hpp"
#include "annulus/types.hpp"

#include <span>
#include <vector>

namespace annulus {

struct ScanConfig {
  std::size_t k = 2;       ///< harmonics per candidate set
  int omega_max = 10;      ///< largest frequency considered
  double beta = 1e5;       ///< cap on ||X||_F
  std::vector<double> lambda_ladder{1e-4, 1e-3, 1e-1, 10.0};
  /// Relative tolerance (times max |B|) under which two RMS errors count as tied;
  /// tied entries are ordered lexicographically by frequency.
  double tie_tolerance = 1e-10;
  /// Worker threads for scans and cross-validation; 0 uses ANNULUS_THREADS or the
  /// hardware concurrency.
  unsigned threads = 0;

  /// Throws InvalidArgument on k < 1, omega_max < k, beta <= 0 or a non-ascending ladder.
  void validate() const;
};

struct FitResult {
  CoefficientMatrix coefficients;
  FitReport report;
};

struct ScanEntry {
  HarmonicSet harmonics;
  FitReport report;
};

struct ScanResult {
  std::vector<ScanEntry> entries;  ///< best (lowest eps_p) first
};

struct CrossValTrial {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  std::vector<double> test_errors_squared;  ///< eps_test^2 per candidate
  std::vector<bool> flagged;                ///< training fit hit the norm cap
};

struct CrossValReport {
  std::vector<HarmonicSet> candidates;
  std::vector<CrossValTrial> trials;
  std::vector<double> mean_errors_squared;           ///< over all trials
  std::vector<double> mean_errors_squared_unflagged; ///< NaN when every trial was flagged
  std::vector<double> stddev_errors_squared;

  /// Index of the candidate with the lowest mean eps_test^2.
  std::size_t best() const;
};

/// Brute-force fit for one candidate set: least squares first, then the lambda
/// ladder in ascending order until ||X||_F < beta. An exhausted ladder returns the
/// largest-lambda solution with report.norm_capped set. A rejected (singular)
/// least-squares step goes straight to the ladder.
FitResult algorithm1_fit(const MeasurementGrid& grid, const HarmonicSet& harmonics,
                         const ScanConfig& config = {});

/// Same, with a diagonal per-rake weight applied to both A and B.
FitResult algorithm1_fit(const MeasurementGrid& grid, const HarmonicSet& harmonics,
                         const ScanConfig& config, std::span<const double> rake_weights);

/// All ascending k-tuples drawn from 1..omega_max, lexicographic.
std::vector<HarmonicSet> enumerate_harmonic_sets(std::size_t k, int omega_max);

/// All size-`choose` subsets of {0..n-1}, lexicographic.
std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t choose);

/// Runs algorithm1_fit on every candidate set and ranks by eps_p (ties lexicographic).
ScanResult scan_frequencies(const MeasurementGrid& grid, const ScanConfig& config = {});

/// Averages eps_p per candidate over several extracts measured on the same rakes
/// (unweighted mean), ranked like scan_frequencies.
ScanResult scan_frequencies_mean(std::span<const MeasurementGrid> extracts,
                                 const ScanConfig& config = {});

/// Leave-P-out cross-validation: every C(N, n_train) training subset is fitted with
/// algorithm1_fit and scored on the held-out rakes with
/// eps_test^2 = ||A_test X - B_test||_F^2 / (N_test M).
CrossValReport leave_p_out_cv(const MeasurementGrid& grid, std::span<const HarmonicSet> candidates,
                              std::size_t n_train, const ScanConfig& config = {});

/// The four pairs that recur in the engine study: (1,4), (1,6), (4,9), (6,9).
std::vector<HarmonicSet> default_cv_candidates();

/// Resolves ScanConfig::threads == 0 from ANNULUS_THREADS / hardware.
unsigned resolve_thread_count(unsigned requested);

}  // namespace annulus

namespace annulus {

/// Single regularized fit at a caller-chosen lambda (0 = plain least squares),
/// reported like algorithm1_fit; norm_capped marks ||X||_F >= beta.
FitResult fixed_lambda_fit(const MeasurementGrid& grid, const HarmonicSet& harmonics, double lambda,
                           const ScanConfig& config = {});

/// Fit at the L-curve corner over `lambda_grid`.
FitResult l_curve_fit(const MeasurementGrid& grid, const HarmonicSet& harmonics,
                      std::span<const double> lambda_grid, const ScanConfig& config = {});

}  // namespace annulus
