// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero if any fails.

#include "annulus/design.hpp"
#include "annulus/errors.hpp"
#include "annulus/field.hpp"
#include "annulus/io.hpp"
#include "annulus/log.hpp"
#include "annulus/selection.hpp"
#include "annulus/solvers.hpp"
#include "annulus/synthetic.hpp"

#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

using namespace annulus;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void report(const char* id, bool ok, const std::string& detail) {
  std::cout << id << ' ' << (ok ? "PASS" : "FAIL") << "  " << detail << std::endl;
  if (!ok) ++failures;
}

void guarded(const char* id, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(id, false, std::string("exception: ") + e.what());
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

HarmonicSet random_harmonics(std::mt19937_64& rng, int k) {
  std::uniform_int_distribution<int> w(1, 10);
  std::vector<int> omegas;
  while (static_cast<int>(omegas.size()) < k) {
    const int c = w(rng);
    if (std::find(omegas.begin(), omegas.end(), c) == omegas.end()) omegas.push_back(c);
  }
  return HarmonicSet(omegas);
}

MeasurementGrid canonical_grid(const std::vector<double>& thetas, double noise = 0.0,
                               std::uint64_t seed = 0) {
  auto spec = canonical_profile();
  spec.noise_std = noise;
  return sample_onto_rakes(spec, thetas, equal_span_radii(spec.annulus), seed);
}

void ac1() {
  const auto start = Clock::now();
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> kd(1, 3), md(3, 9);
  const auto lambdas = log_spaced_grid(1e-6, 10.0, 15);
  double worst_ols = 0.0, worst_mono = 0.0, worst_sv = 0.0;
  int systems = 0;
  while (systems < 200) {
    const int k = kd(rng);
    std::uniform_int_distribution<int> nd(std::max(4, 2 * k + 1), 10);
    const int n = nd(rng), m = md(rng);
    const auto design = build_fourier_design(oracle::random_angles(rng, n), random_harmonics(rng, k));
    if (condition_numbers(design, 0.0).plain > 1e6) continue;  // keep OLS well posed
    ++systems;
    const Matrix b = oracle::random_matrix(rng, n, m, 5.0);
    const Matrix ols = solve_ols(design, b).matrix;
    const Matrix t0 = solve_tikhonov(design, b, 0.0).matrix;
    worst_ols = std::max(worst_ols, (t0 - ols).norm() / ols.norm());

    double prev_norm = ols.norm(), prev_res = (design.matrix * ols - b).norm();
    for (double lambda : lambdas) {
      const Matrix x = solve_tikhonov(design, b, lambda).matrix;
      const double norm = x.norm(), res = (design.matrix * x - b).norm();
      worst_mono = std::max(worst_mono, (norm - prev_norm) / std::max(1.0, prev_norm));
      worst_mono = std::max(worst_mono, (prev_res - res) / std::max(1.0, prev_res));
      prev_norm = norm;
      prev_res = res;

      const Vector s = singular_values(design);
      const Vector st = augmented_singular_values(design, lambda);
      for (Eigen::Index i = 0; i < st.size(); ++i) {
        const double si = i < s.size() ? s(i) : 0.0;
        worst_sv = std::max(worst_sv, std::abs(st(i) * st(i) - (si * si + lambda * lambda)) /
                                          std::max(1.0, si * si + lambda * lambda));
      }
    }
  }
  const double t = seconds_since(start);
  const bool ok = worst_ols <= 1e-10 && worst_mono <= 1e-10 && worst_sv <= 1e-10 && t < 10.0;
  report("AC1", ok,
         "solver identities on 200 systems: tikhonov(0) vs ols " + fmt(worst_ols) +
             ", monotonicity violation " + fmt(worst_mono) + ", sigma~^2 identity " + fmt(worst_sv) +
             " (tol 1e-10), " + fmt(t) + " s (< 10 s)");
}

void ac2() {
  std::mt19937_64 rng(202);
  std::uniform_int_distribution<int> kd(1, 3), md(3, 9);
  double worst = 0.0;
  int instances = 0;
  while (instances < 100) {
    const int k = kd(rng);
    std::uniform_int_distribution<int> nd(2 * k + 1, 10);
    const int n = nd(rng), m = md(rng);
    const auto design = build_fourier_design(oracle::random_angles(rng, n), random_harmonics(rng, k));
    if (condition_numbers(design, 0.0).plain > 1e6) continue;
    ++instances;
    Matrix b = oracle::random_matrix(rng, n, m, 3.0);
    b.array() += 500.0;
    const auto x = solve_ols(design, b);
    worst = std::max(worst, std::abs(rms_error(design, x, b) - rms_error_projected(design, b)));
  }
  report("AC2", worst <= 1e-10,
         "rms direct vs projection form on 100 OLS instances: max |diff| " + fmt(worst) +
             " K (tol 1e-10)");
}

void ac3() {
  const auto grid = canonical_grid(rake_case_angles(RakeCase::I));
  const auto design = build_fourier_design(grid.thetas(), HarmonicSet{1, 4, 19, 49});
  const auto sol = min_norm_solve(design, grid.values());
  const Matrix& x = sol.coefficients.matrix;
  const double repro = (design.matrix * x - grid.values()).norm() / grid.values().norm();
  const Matrix ns = oracle::null_space(design.matrix);
  std::mt19937_64 rng(303);
  int beaten = 0;
  for (int i = 0; i < 100; ++i) {
    const Matrix z = ns * oracle::random_matrix(rng, ns.cols(), x.cols());
    if (x.norm() <= (x + z).norm() + 1e-6) ++beaten;
  }
  const bool ok = design.rows() == 6 && design.cols() == 9 && sol.numerical_rank == 5 &&
                  repro <= 1e-8 && beaten == 100;
  report("AC3", ok,
         "min-norm on Case I, omega=(1,4,19,49): A " + std::to_string(design.rows()) + "x" +
             std::to_string(design.cols()) + ", rank " + std::to_string(sol.numerical_rank) +
             " (want 5), relative residual " + fmt(repro) + " (tol 1e-8), smaller than " +
             std::to_string(beaten) + "/100 null-space alternatives");
}

void ac4() {
  const auto start = Clock::now();
  const HarmonicSet target{1, 4};
  std::string firsts;
  bool all_first = true;
  int worst_hits = 50;
  for (auto which : {RakeCase::I, RakeCase::II, RakeCase::III, RakeCase::IV}) {
    const auto thetas = rake_case_angles(which);
    const auto clean = scan_frequencies(canonical_grid(thetas));
    const bool first = clean.entries.front().harmonics == target;
    all_first = all_first && first;
    firsts += clean.entries.front().harmonics.to_string() + " ";
    int hits = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      const auto noisy = scan_frequencies(canonical_grid(thetas, 0.25, seed));
      for (std::size_t r = 0; r < 3; ++r) hits += noisy.entries[r].harmonics == target;
    }
    worst_hits = std::min(worst_hits, hits);
  }
  const double t = seconds_since(start);
  const bool ok = all_first && worst_hits >= 45 && t < 30.0;
  report("AC4", ok,
         "frequency scan, Cases I-IV noiseless top pair: " + firsts +
             "; sigma=0.25 K top-3 rate (worst case) " + std::to_string(worst_hits) +
             "/50 (need >= 45), " + fmt(t) + " s (< 30 s)");
}

void ac5() {
  // Profile restricted to the (1,4) model class: the canonical modes 1 and 4 only.
  auto spec = canonical_profile();
  spec.harmonics.resize(2);
  const auto grid = sample_onto_rakes(spec, engine_rake_angles('E'), equal_span_radii(spec.annulus));
  const auto candidates = default_cv_candidates();
  const auto cv = leave_p_out_cv(grid, candidates, 6);
  bool strict = true;
  std::string means;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    means += candidates[c].to_string() + "=" + fmt(cv.mean_errors_squared[c]) + " ";
    if (c > 0) strict = strict && cv.mean_errors_squared[0] < cv.mean_errors_squared[c];
  }
  const bool ok = cv.trials.size() == 28 && candidates[0] == (HarmonicSet{1, 4}) && strict;
  report("AC5", ok,
         "leave-P-out on Engine E, n_train=6: " + std::to_string(cv.trials.size()) +
             " trials (want 28); mean eps_test^2 " + means);
}

void ac6() {
  const AnnulusGeometry annulus{0.5, 1.0};
  const auto radii = equal_span_radii(annulus);
  std::mt19937_64 rng(606);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    Matrix x = oracle::random_matrix(rng, 5, 7, 3.0);
    x.row(0).array() += 520.0;
    const SpatialModel model(CoefficientMatrix{x, random_harmonics(rng, 2)}, radii, 1 + i % 3, annulus);
    const double quad = oracle::annulus_average([&](double r, double t) { return model.evaluate(r, t); },
                                                annulus.r_inner, annulus.r_outer);
    worst = std::max(worst, std::abs(area_average_analytic(model) - quad) / std::abs(quad));
  }

  Matrix harmonic_only = oracle::random_matrix(rng, 5, 7, 3.0);
  harmonic_only.row(0).setZero();
  const double pure = area_average_analytic(
      SpatialModel(CoefficientMatrix{harmonic_only, HarmonicSet{1, 4}}, radii, 2, annulus));

  const auto spec = canonical_profile();
  const auto grid = canonical_grid(rake_case_angles(RakeCase::I));
  const auto fitted = fit_spatial_model(grid, spec.annulus, HarmonicSet{1, 4});
  const double analytic = area_average_analytic(fitted.model);
  const double weighted = area_average_weighted(grid, spec.annulus);
  const double gap = std::abs(weighted - analytic);

  const bool ok = worst <= 1e-6 && pure == 0.0 && std::abs(analytic - spec.mean_level) <= 1e-3 &&
                  gap > 0.0 && gap < 5.0;
  std::ostringstream os;
  os.precision(10);
  os << "area averages: analytic vs 64x64 Gauss-Legendre max rel " << fmt(worst)
     << " (tol 1e-6); pure harmonics " << pure << "; Case I analytic " << analytic
     << " K vs mean 526.85 (tol 1e-3); sector-weighted " << weighted << " K, gap " << gap
     << " K (want 0 < gap < 5)";
  report("AC6", ok, os.str());
}

int shell(const std::string& command) {
  const int status = std::system(command.c_str());
  return status;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

void ac7() {
  const std::string cli = ANNULUS_CLI;
  const auto dir = std::filesystem::temp_directory_path() / "annulus_acceptance";
  std::filesystem::create_directories(dir);
  const auto field = dir / "field.txt";

  const auto start = Clock::now();
  const int pipe_status = shell(cli + " synth --canonical --case I | " + cli + " fit --omega 1,4 | " +
                                cli + " export > " + field.string());
  const double t = seconds_since(start);
  std::size_t nodes = 0;
  if (pipe_status == 0) nodes = io::parse_field_export(slurp(field)).nodes.size();

  const auto measurement = dir / "case_I.txt";
  shell(cli + " synth --canonical --case I -o " + measurement.string());
  const auto golden = slurp(std::filesystem::path(ANNULUS_GOLDEN_DIR) / "scan_case_I.txt");
  int stable = 0;
  const char* thread_counts[] = {"1", "4", "1", "4"};
  for (const char* threads : thread_counts) {
    const auto out = dir / (std::string("scan_") + threads + ".txt");
    shell(cli + " --threads " + threads + " scan " + measurement.string() + " -o " + out.string());
    stable += !golden.empty() && slurp(out) == golden;
  }
  std::filesystem::remove_all(dir);

  const bool ok = pipe_status == 0 && nodes == 360u * 50u && t < 2.0 && stable == 4;
  report("AC7", ok,
         "CLI synth | fit | export: exit " + std::to_string(pipe_status) + ", " +
             std::to_string(nodes) + " nodes, " + fmt(t) + " s (< 2 s); golden scan table identical in " +
             std::to_string(stable) + "/4 runs (threads 1,4,1,4)");
}

}  // namespace

int main() {
  // Underdetermined-system warnings from the scans are expected here.
  log::set_warning_handler([](std::string_view) {});
  guarded("AC1", ac1);
  guarded("AC2", ac2);
  guarded("AC3", ac3);
  guarded("AC4", ac4);
  guarded("AC5", ac5);
  guarded("AC6", ac6);
  guarded("AC7", ac7);
  std::cout << (failures == 0 ? "all acceptance criteria passed" : std::to_string(failures) + " failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
