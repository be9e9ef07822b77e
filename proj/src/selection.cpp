#include "annulus/selection.hpp"

#include "annulus/design.hpp"
#include "annulus/errors.hpp"
#include "annulus/log.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <optional>
#include <tuple>
#include <string>
#include <thread>

namespace annulus {

void ScanConfig::validate() const {
  if (k < 1) throw InvalidArgument("scan needs k >= 1 harmonics");
  if (omega_max < static_cast<int>(k)) throw InvalidArgument("omega_max must be >= k");
  if (!(beta > 0.0)) throw InvalidArgument("beta must be positive");
  if (lambda_ladder.empty()) throw InvalidArgument("lambda ladder must not be empty");
  for (std::size_t i = 0; i < lambda_ladder.size(); ++i) {
    if (!(lambda_ladder[i] > 0.0) || !std::isfinite(lambda_ladder[i]) ||
        (i > 0 && !(lambda_ladder[i] > lambda_ladder[i - 1]))) {
      throw InvalidArgument("lambda ladder must be positive and strictly ascending");
    }
  }
  if (!(tie_tolerance >= 0.0)) throw InvalidArgument("tie tolerance must be >= 0");
}

unsigned resolve_thread_count(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("ANNULUS_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

void warn_if_underdetermined(std::size_t rakes, const HarmonicSet& harmonics) {
  if (rakes <= harmonics.columns()) {
    log::warn(std::to_string(rakes) + " rakes for " + std::to_string(harmonics.columns()) +
              " Fourier unknowns (harmonics " + harmonics.to_string() +
              "); more rakes than unknowns is recommended");
  }
}

FitResult fit_impl(const MeasurementGrid& grid, const HarmonicSet& harmonics,
                   const ScanConfig& config, std::span<const double> rake_weights) {
  FourierDesign design = build_fourier_design(grid.thetas(), harmonics);
  Matrix values = grid.values();
  if (!rake_weights.empty()) {
    std::tie(design, values) = apply_row_weights(design, values, rake_weights);
  }

  FitReport report;
  std::optional<CoefficientMatrix> x;
  try {
    x = solve_ols(design, values);
  } catch (const SingularSystem&) {
    report.ols_singular = true;
  }
  for (std::size_t i = 0; i < config.lambda_ladder.size(); ++i) {
    if (x && x->frobenius_norm() < config.beta) break;
    report.lambda_used = config.lambda_ladder[i];
    x = solve_tikhonov(design, values, report.lambda_used);
  }
  report.solution_norm = x->frobenius_norm();
  report.norm_capped = !(report.solution_norm < config.beta);
  report.rms_error = rms_error(design, *x, values);
  const auto cond = condition_numbers(design, report.lambda_used);
  report.cond_plain = cond.plain;
  report.cond_augmented = cond.augmented;
  return FitResult{std::move(*x), report};
}

void rank_entries(std::vector<ScanEntry>& entries, double tolerance) {
  std::stable_sort(entries.begin(), entries.end(), [](const ScanEntry& a, const ScanEntry& b) {
    if (a.report.rms_error != b.report.rms_error) return a.report.rms_error < b.report.rms_error;
    return a.harmonics < b.harmonics;
  });
  for (auto first = entries.begin(); first != entries.end();) {
    const double anchor = first->report.rms_error;
    auto last = std::find_if(first, entries.end(), [&](const ScanEntry& e) {
      return e.report.rms_error - anchor > tolerance;
    });
    std::sort(first, last,
              [](const ScanEntry& a, const ScanEntry& b) { return a.harmonics < b.harmonics; });
    first = last;
  }
}

}  // namespace

FitResult algorithm1_fit(const MeasurementGrid& grid, const HarmonicSet& harmonics,
                         const ScanConfig& config) {
  return algorithm1_fit(grid, harmonics, config, {});
}

FitResult algorithm1_fit(const MeasurementGrid& grid, const HarmonicSet& harmonics,
                         const ScanConfig& config, std::span<const double> rake_weights) {
  config.validate();
  warn_if_underdetermined(grid.rakes(), harmonics);
  return fit_impl(grid, harmonics, config, rake_weights);
}

std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t choose) {
  std::vector<std::vector<std::size_t>> out;
  if (choose > n) return out;
  std::vector<std::size_t> current(choose);
  std::iota(current.begin(), current.end(), std::size_t{0});
  while (true) {
    out.push_back(current);
    std::size_t i = choose;
    while (i > 0 && current[i - 1] == n - choose + i - 1) --i;
    if (i == 0) break;
    ++current[i - 1];
    for (std::size_t j = i; j < choose; ++j) current[j] = current[j - 1] + 1;
  }
  return out;
}

std::vector<HarmonicSet> enumerate_harmonic_sets(std::size_t k, int omega_max) {
  if (k < 1 || omega_max < static_cast<int>(k)) {
    throw InvalidArgument("need 1 <= k <= omega_max to enumerate harmonic sets");
  }
  std::vector<HarmonicSet> out;
  for (const auto& combo : combinations(static_cast<std::size_t>(omega_max), k)) {
    std::vector<int> omegas;
    for (auto c : combo) omegas.push_back(static_cast<int>(c) + 1);
    out.emplace_back(std::move(omegas));
  }
  return out;
}

ScanResult scan_frequencies(const MeasurementGrid& grid, const ScanConfig& config) {
  return scan_frequencies_mean(std::span<const MeasurementGrid>(&grid, 1), config);
}

ScanResult scan_frequencies_mean(std::span<const MeasurementGrid> extracts,
                                 const ScanConfig& config) {
  config.validate();
  if (extracts.empty()) throw InvalidArgument("scan needs at least one extract");
  const auto sets = enumerate_harmonic_sets(config.k, config.omega_max);
  warn_if_underdetermined(extracts.front().rakes(), sets.front());

  const std::size_t per_set = extracts.size();
  std::vector<FitReport> reports(sets.size() * per_set);
  detail::parallel_for(reports.size(), resolve_thread_count(config.threads), [&](std::size_t i) {
    reports[i] = fit_impl(extracts[i % per_set], sets[i / per_set], config, {}).report;
  });

  double scale = 0.0;
  for (const auto& g : extracts) scale = std::max(scale, g.values().cwiseAbs().maxCoeff());

  ScanResult result;
  result.entries.reserve(sets.size());
  for (std::size_t s = 0; s < sets.size(); ++s) {
    FitReport merged = reports[s * per_set];
    if (per_set > 1) {
      double rms = 0.0, norm = 0.0, lambda = 0.0;
      for (std::size_t e = 0; e < per_set; ++e) {
        const auto& r = reports[s * per_set + e];
        rms += r.rms_error;
        norm += r.solution_norm;
        lambda = std::max(lambda, r.lambda_used);
        merged.norm_capped = merged.norm_capped || r.norm_capped;
        merged.ols_singular = merged.ols_singular || r.ols_singular;
      }
      merged.rms_error = rms / static_cast<double>(per_set);
      merged.solution_norm = norm / static_cast<double>(per_set);
      merged.lambda_used = lambda;
    }
    result.entries.push_back(ScanEntry{sets[s], merged});
  }
  rank_entries(result.entries, config.tie_tolerance * scale);
  return result;
}

std::vector<HarmonicSet> default_cv_candidates() {
  return {HarmonicSet{1, 4}, HarmonicSet{1, 6}, HarmonicSet{4, 9}, HarmonicSet{6, 9}};
}

std::size_t CrossValReport::best() const {
  if (mean_errors_squared.empty()) throw InvalidArgument("empty cross-validation report");
  return static_cast<std::size_t>(
      std::min_element(mean_errors_squared.begin(), mean_errors_squared.end()) -
      mean_errors_squared.begin());
}

CrossValReport leave_p_out_cv(const MeasurementGrid& grid, std::span<const HarmonicSet> candidates,
                              std::size_t n_train, const ScanConfig& config) {
  config.validate();
  if (candidates.empty()) throw InvalidArgument("cross-validation needs at least one candidate");
  if (n_train == 0 || n_train >= grid.rakes()) {
    throw InvalidArgument("n_train must satisfy 0 < n_train < N (N = " +
                          std::to_string(grid.rakes()) + ", n_train = " + std::to_string(n_train) +
                          ")");
  }
  for (const auto& c : candidates) warn_if_underdetermined(n_train, c);

  CrossValReport report;
  report.candidates.assign(candidates.begin(), candidates.end());
  const auto subsets = combinations(grid.rakes(), n_train);
  report.trials.resize(subsets.size());
  for (std::size_t t = 0; t < subsets.size(); ++t) {
    auto& trial = report.trials[t];
    trial.train = subsets[t];
    for (std::size_t i = 0; i < grid.rakes(); ++i) {
      if (!std::binary_search(trial.train.begin(), trial.train.end(), i)) trial.test.push_back(i);
    }
    trial.test_errors_squared.assign(candidates.size(), 0.0);
    trial.flagged.assign(candidates.size(), false);
  }

  const std::size_t nc = candidates.size();
  detail::parallel_for(subsets.size() * nc, resolve_thread_count(config.threads),
                       [&](std::size_t task) {
    auto& trial = report.trials[task / nc];
    const std::size_t c = task % nc;
    const auto train = grid.select_rakes(trial.train);
    const auto test = grid.select_rakes(trial.test);
    const auto fit = fit_impl(train, candidates[c], config, {});
    const auto a_test = build_fourier_design(test.thetas(), candidates[c]);
    trial.test_errors_squared[c] =
        (a_test.matrix * fit.coefficients.matrix - test.values()).squaredNorm() /
        static_cast<double>(test.values().size());
    trial.flagged[c] = fit.report.norm_capped;
  });

  for (std::size_t c = 0; c < nc; ++c) {
    double sum = 0.0, sum_unflagged = 0.0;
    std::size_t unflagged = 0;
    for (const auto& trial : report.trials) {
      sum += trial.test_errors_squared[c];
      if (!trial.flagged[c]) {
        sum_unflagged += trial.test_errors_squared[c];
        ++unflagged;
      }
    }
    const double mean = sum / static_cast<double>(report.trials.size());
    double var = 0.0;
    for (const auto& trial : report.trials) {
      var += (trial.test_errors_squared[c] - mean) * (trial.test_errors_squared[c] - mean);
    }
    report.mean_errors_squared.push_back(mean);
    report.mean_errors_squared_unflagged.push_back(
        unflagged ? sum_unflagged / static_cast<double>(unflagged)
                  : std::numeric_limits<double>::quiet_NaN());
    report.stddev_errors_squared.push_back(
        std::sqrt(var / static_cast<double>(report.trials.size())));
  }
  return report;
}

}  // namespace annulus

namespace annulus {

FitResult fixed_lambda_fit(const MeasurementGrid& grid, const HarmonicSet& harmonics, double lambda,
                           const ScanConfig& config) {
  config.validate();
  const auto design = build_fourier_design(grid.thetas(), harmonics);
  auto x = solve_tikhonov(design, grid.values(), lambda);
  FitReport report;
  report.lambda_used = lambda;
  report.solution_norm = x.frobenius_norm();
  report.norm_capped = !(report.solution_norm < config.beta);
  report.rms_error = rms_error(design, x, grid.values());
  const auto cond = condition_numbers(design, lambda);
  report.cond_plain = cond.plain;
  report.cond_augmented = cond.augmented;
  return FitResult{std::move(x), report};
}

FitResult l_curve_fit(const MeasurementGrid& grid, const HarmonicSet& harmonics,
                      std::span<const double> lambda_grid, const ScanConfig& config) {
  const auto design = build_fourier_design(grid.thetas(), harmonics);
  const auto curve = l_curve(design, grid.values(), lambda_grid);
  return fixed_lambda_fit(grid, harmonics, curve.knee_lambda(), config);
}

}  // namespace annulus
