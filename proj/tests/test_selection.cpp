#include "annulus/errors.hpp"
#include "annulus/log.hpp"
#include "annulus/selection.hpp"
#include "annulus/synthetic.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace annulus;

namespace {

MeasurementGrid canonical_grid(RakeCase which, double noise = 0.0, std::uint64_t seed = 0) {
  auto spec = canonical_profile();
  spec.noise_std = noise;
  return sample_onto_rakes(spec, rake_case_angles(which), equal_span_radii(spec.annulus), seed);
}

// Readings generated exactly from a (1,4) Fourier model with radially varying coefficients.
MeasurementGrid one_four_grid(const std::vector<double>& thetas, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto radii = equal_span_radii(AnnulusGeometry{0.5, 1.0});
  Matrix x = oracle::random_matrix(rng, 5, static_cast<Eigen::Index>(radii.size()), 2.0);
  x.row(0).array() += 520.0;
  const auto d = build_fourier_design(thetas, HarmonicSet{1, 4});
  return MeasurementGrid(thetas, radii, d.matrix * x);
}

}  // namespace

TEST(ScanConfigTest, Validation) {
  ScanConfig c;
  EXPECT_NO_THROW(c.validate());
  c.k = 0;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = {};
  c.omega_max = 1;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = {};
  c.beta = 0.0;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = {};
  c.lambda_ladder = {0.1, 0.01};
  EXPECT_THROW(c.validate(), InvalidArgument);
  c.lambda_ladder = {-1.0, 0.01};
  EXPECT_THROW(c.validate(), InvalidArgument);
}

TEST(Algorithm1, WellConditionedStaysUnregularized) {
  const auto grid = one_four_grid(engine_rake_angles('E'), 1);
  const auto fit = algorithm1_fit(grid, HarmonicSet{1, 4});
  EXPECT_EQ(fit.report.lambda_used, 0.0);
  EXPECT_FALSE(fit.report.regularized());
  EXPECT_FALSE(fit.report.norm_capped);
  EXPECT_LT(fit.report.rms_error, 1e-9);
  EXPECT_DOUBLE_EQ(fit.report.cond_plain, fit.report.cond_augmented);
}

TEST(Algorithm1, TinyBetaExhaustsLadder) {
  const auto grid = canonical_grid(RakeCase::I);
  ScanConfig c;
  c.beta = 1e-6;
  const auto fit = algorithm1_fit(grid, HarmonicSet{1, 4}, c);
  EXPECT_EQ(fit.report.lambda_used, 10.0);
  EXPECT_TRUE(fit.report.norm_capped);
  const auto direct = solve_tikhonov(build_fourier_design(grid.thetas(), HarmonicSet{1, 4}),
                                     grid.values(), 10.0);
  EXPECT_LT((fit.coefficients.matrix - direct.matrix).norm(), 1e-12 * direct.matrix.norm());
}

TEST(Algorithm1, IllConditionedEngineAUsesLadder) {
  auto spec = canonical_profile();
  const auto grid = sample_onto_rakes(spec, engine_rake_angles('A'), equal_span_radii(spec.annulus));
  for (const auto& h : {HarmonicSet{2, 5}, HarmonicSet{1, 3}, HarmonicSet{2, 4}}) {
    const auto fit = algorithm1_fit(grid, h);
    const std::vector<double> ladder{1e-4, 1e-3, 1e-1, 10.0};
    EXPECT_NE(std::find(ladder.begin(), ladder.end(), fit.report.lambda_used), ladder.end())
        << h.to_string();
    EXPECT_LT(fit.report.solution_norm, 1e5);
    EXPECT_LT(fit.report.cond_augmented, fit.report.cond_plain);
  }
}

TEST(Algorithm1, WarnsWhenRakesDoNotExceedUnknowns) {
  const auto grid = canonical_grid(RakeCase::I);
  log::ScopedWarningCapture capture;
  algorithm1_fit(grid, HarmonicSet{1, 2, 3});
  EXPECT_TRUE(capture.contains("rakes for 7"));
}

TEST(Algorithm1, RegularizationNeverGrowsNorm) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const auto thetas = oracle::random_angles(rng, 7);
    const MeasurementGrid grid(thetas, {0.6, 0.8, 0.9}, oracle::random_matrix(rng, 7, 3, 5.0));
    const HarmonicSet h{1 + trial % 4, 5 + trial % 5};
    const auto design = build_fourier_design(thetas, h);
    double ols_norm;
    try {
      ols_norm = solve_ols(design, grid.values()).frobenius_norm();
    } catch (const SingularSystem&) {
      continue;
    }
    const auto fit = algorithm1_fit(grid, h);
    EXPECT_LE(fit.report.solution_norm, ols_norm * (1 + 1e-10) + 1e-10);
  }
}

TEST(Algorithm1, RakeWeightsMatchManualScaling) {
  const auto grid = canonical_grid(RakeCase::II);
  const std::vector<double> w{1, 2, 1, 0.5, 1, 3};
  const auto fit = algorithm1_fit(grid, HarmonicSet{1, 4}, ScanConfig{}, w);
  const auto [wd, wb] =
      apply_row_weights(build_fourier_design(grid.thetas(), HarmonicSet{1, 4}), grid.values(), w);
  const auto x = solve_ols(wd, wb);
  EXPECT_LT((fit.coefficients.matrix - x.matrix).norm(), 1e-10 * x.matrix.norm());
}

TEST(Combinatorics, CountsAndOrder) {
  EXPECT_EQ(combinations(8, 6).size(), 28u);
  EXPECT_EQ(combinations(5, 0).size(), 1u);
  EXPECT_TRUE(combinations(3, 4).empty());
  const auto c = combinations(4, 2);
  const std::vector<std::vector<std::size_t>> expected{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  EXPECT_EQ(c, expected);
  const auto sets = enumerate_harmonic_sets(2, 10);
  ASSERT_EQ(sets.size(), 45u);
  EXPECT_EQ(sets.front(), (HarmonicSet{1, 2}));
  EXPECT_EQ(sets.back(), (HarmonicSet{9, 10}));
  EXPECT_TRUE(std::is_sorted(sets.begin(), sets.end()));
  EXPECT_EQ(enumerate_harmonic_sets(3, 6).size(), 20u);
  EXPECT_THROW(enumerate_harmonic_sets(3, 2), InvalidArgument);
}

TEST(Scan, CoversEveryPairOnce) {
  const auto result = scan_frequencies(canonical_grid(RakeCase::III));
  ASSERT_EQ(result.entries.size(), 45u);
  std::set<std::vector<int>> seen;
  for (const auto& e : result.entries) {
    seen.insert(e.harmonics.values());
    EXPECT_TRUE(e.report.solution_norm < 1e5 || e.report.norm_capped);
  }
  EXPECT_EQ(seen.size(), 45u);
  for (std::size_t i = 1; i < result.entries.size(); ++i) {
    EXPECT_LE(result.entries[i - 1].report.rms_error,
              result.entries[i].report.rms_error + 1e-10 * 530.0);
  }
}

TEST(Scan, ConstantInputFitsEveryPair) {
  const std::vector<double> thetas{15, 45, 123, 190, 250, 316, 340};
  const MeasurementGrid grid(thetas, {0.6, 0.7, 0.8}, Matrix::Constant(7, 3, 431.5));
  const auto result = scan_frequencies(grid);
  ASSERT_EQ(result.entries.size(), 45u);
  for (const auto& e : result.entries) {
    EXPECT_LT(e.report.rms_error, 1e-8) << e.harmonics.to_string();
    const auto fit = algorithm1_fit(grid, e.harmonics);
    EXPECT_LT((fit.coefficients.matrix.row(0).array() - 431.5).abs().maxCoeff(), 1e-6);
    EXPECT_LT(fit.coefficients.matrix.bottomRows(4).cwiseAbs().maxCoeff(), 1e-6);
  }
  // every pair ties, so the ranking falls back to lexicographic order
  EXPECT_TRUE(std::is_sorted(result.entries.begin(), result.entries.end(),
                             [](const ScanEntry& a, const ScanEntry& b) { return a.harmonics < b.harmonics; }));
}

TEST(Scan, CanonicalCasesPickOneFour) {
  for (auto which : {RakeCase::I, RakeCase::II, RakeCase::III, RakeCase::IV}) {
    const auto result = scan_frequencies(canonical_grid(which));
    EXPECT_EQ(result.entries.front().harmonics, (HarmonicSet{1, 4}))
        << "case " << static_cast<int>(which) << " picked "
        << result.entries.front().harmonics.to_string();
  }
}

TEST(Scan, DeterministicAcrossThreadCounts) {
  const auto grid = canonical_grid(RakeCase::II, 0.25, 11);
  ScanConfig one, four;
  one.threads = 1;
  four.threads = 4;
  const auto a = scan_frequencies(grid, one);
  const auto b = scan_frequencies(grid, four);
  ASSERT_EQ(a.entries.size(), b.entries.size());
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    EXPECT_EQ(a.entries[i].harmonics, b.entries[i].harmonics);
    EXPECT_EQ(a.entries[i].report.rms_error, b.entries[i].report.rms_error);
  }
}

TEST(Scan, MeanOverExtractsAveragesErrors) {
  const std::vector<MeasurementGrid> extracts{canonical_grid(RakeCase::I, 0.25, 1),
                                              canonical_grid(RakeCase::I, 0.25, 2),
                                              canonical_grid(RakeCase::I, 0.25, 3)};
  const auto mean = scan_frequencies_mean(extracts);
  ASSERT_EQ(mean.entries.size(), 45u);
  for (const auto& e : mean.entries) {
    double expected = 0.0;
    for (const auto& g : extracts) expected += algorithm1_fit(g, e.harmonics).report.rms_error;
    EXPECT_NEAR(e.report.rms_error, expected / 3.0, 1e-12);
  }
  EXPECT_THROW(scan_frequencies_mean(std::span<const MeasurementGrid>{}), InvalidArgument);
}

TEST(CrossValidation, TwentyEightTrials) {
  const auto grid = one_four_grid(engine_rake_angles('E'), 5);
  const auto candidates = default_cv_candidates();
  const auto report = leave_p_out_cv(grid, candidates, 6);
  ASSERT_EQ(report.trials.size(), 28u);
  for (const auto& t : report.trials) {
    EXPECT_EQ(t.train.size(), 6u);
    EXPECT_EQ(t.test.size(), 2u);
    std::vector<std::size_t> all(t.train);
    all.insert(all.end(), t.test.begin(), t.test.end());
    std::sort(all.begin(), all.end());
    EXPECT_EQ(std::adjacent_find(all.begin(), all.end()), all.end());
    for (double e : t.test_errors_squared) EXPECT_GE(e, 0.0);
    EXPECT_LT(t.test_errors_squared[0], 1e-16);
  }
}

TEST(CrossValidation, TruthModelWins) {
  const auto grid = one_four_grid(engine_rake_angles('E'), 6);
  const auto report = leave_p_out_cv(grid, default_cv_candidates(), 6);
  EXPECT_EQ(report.best(), 0u);
  for (std::size_t c = 1; c < report.candidates.size(); ++c) {
    EXPECT_LT(report.mean_errors_squared[0], report.mean_errors_squared[c]);
  }
  for (const auto& t : report.trials) EXPECT_LT(std::sqrt(t.test_errors_squared[0]), 1e-8);
}

TEST(CrossValidation, RecomputedErrorsAgree) {
  auto spec = canonical_profile();
  const auto grid = sample_onto_rakes(spec, engine_rake_angles('E'), equal_span_radii(spec.annulus));
  const auto candidates = default_cv_candidates();
  const auto report = leave_p_out_cv(grid, candidates, 6);
  for (const auto& t : report.trials) {
    const auto train = grid.select_rakes(t.train);
    const auto test = grid.select_rakes(t.test);
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      const auto fit = algorithm1_fit(train, candidates[c]);
      const auto& x = fit.coefficients.matrix;
      double sum = 0.0;
      for (std::size_t i = 0; i < test.rakes(); ++i) {
        for (std::size_t j = 0; j < test.probes(); ++j) {
          const double pred = oracle::fourier_value(candidates[c].values(), x.col(j), test.thetas()[i]);
          const double r = pred - test.values()(i, j);
          sum += r * r;
        }
      }
      const double expected = sum / static_cast<double>(test.rakes() * test.probes());
      EXPECT_NEAR(t.test_errors_squared[c], expected, 1e-12 * std::max(1.0, expected));
    }
  }
}

TEST(CrossValidation, EngineECanonicalPrefersOneFour) {
  auto spec = canonical_profile();
  const auto grid = sample_onto_rakes(spec, engine_rake_angles('E'), equal_span_radii(spec.annulus));
  const auto report = leave_p_out_cv(grid, default_cv_candidates(), 6);
  EXPECT_EQ(report.best(), 0u);
  EXPECT_EQ(report.candidates[report.best()], (HarmonicSet{1, 4}));
}

TEST(CrossValidation, FlaggedTrialsAreSeparated) {
  const auto grid = one_four_grid(engine_rake_angles('E'), 7);
  ScanConfig c;
  c.beta = 1e-6;
  const auto report = leave_p_out_cv(grid, default_cv_candidates(), 6, c);
  for (const auto& t : report.trials)
    for (bool f : t.flagged) EXPECT_TRUE(f);
  for (double m : report.mean_errors_squared_unflagged) EXPECT_TRUE(std::isnan(m));
  for (double m : report.mean_errors_squared) EXPECT_TRUE(std::isfinite(m));
}

TEST(CrossValidation, Errors) {
  const auto grid = one_four_grid(engine_rake_angles('E'), 8);
  const auto candidates = default_cv_candidates();
  EXPECT_THROW(leave_p_out_cv(grid, candidates, 8), InvalidArgument);
  EXPECT_THROW(leave_p_out_cv(grid, candidates, 0), InvalidArgument);
  EXPECT_THROW(leave_p_out_cv(grid, std::span<const HarmonicSet>{}, 6), InvalidArgument);
  log::ScopedWarningCapture capture;
  leave_p_out_cv(grid, candidates, 5);
  EXPECT_EQ(capture.messages().size(), candidates.size());
}

TEST(FixedLambda, MatchesTikhonovAndLCurve) {
  const auto grid = canonical_grid(RakeCase::IV);
  const HarmonicSet h{1, 4};
  const auto fit = fixed_lambda_fit(grid, h, 0.01);
  const auto direct = solve_tikhonov(build_fourier_design(grid.thetas(), h), grid.values(), 0.01);
  EXPECT_EQ(fit.coefficients.matrix, direct.matrix);
  EXPECT_EQ(fit.report.lambda_used, 0.01);
  const auto grid_l = default_lambda_grid();
  const auto lc = l_curve_fit(grid, h, grid_l);
  const auto curve = l_curve(build_fourier_design(grid.thetas(), h), grid.values(), grid_l);
  EXPECT_EQ(lc.report.lambda_used, curve.knee_lambda());
}

TEST(ThreadCount, ExplicitWins) {
  EXPECT_EQ(resolve_thread_count(3), 3u);
  EXPECT_GE(resolve_thread_count(0), 1u);
}
