#pragma once

#include "annulus/design.hpp"
#include "annulus/types.hpp"

#include <span>
#include <vector>

namespace annulus {

/// (2k+1) x M Fourier coefficients, one column per probe. Row 0 holds the
/// constant terms x1 that alone determine the area average.
struct CoefficientMatrix {
  Matrix matrix;
  HarmonicSet harmonics;

  double frobenius_norm() const { return matrix.norm(); }
};

struct FitReport {
  double rms_error = 0.0;      ///< eps_p = sqrt(||AX - B||_F^2 / NM) [K]
  double solution_norm = 0.0;  ///< ||X||_F
  double lambda_used = 0.0;    ///< 0 for a plain least-squares solve
  double cond_plain = 1.0;     ///< 2-norm condition number of A (inf when rank deficient)
  double cond_augmented = 1.0; ///< condition number of [A; lambda I]
  bool norm_capped = false;    ///< regularization ladder exhausted with ||X|| still >= beta
  bool ols_singular = false;   ///< the unregularized solve was rejected as singular

  bool regularized() const { return lambda_used > 0.0; }
  double mean_squared_error() const { return rms_error * rms_error; }
};

struct LCurve {
  std::vector<double> lambdas;
  std::vector<double> residual_norms;
  std::vector<double> solution_norms;
  std::size_t knee_index = 0;

  double knee_lambda() const { return lambdas.at(knee_index); }
};

struct MinNormSolution {
  CoefficientMatrix coefficients;
  std::size_t numerical_rank = 0;
  /// Column permutation of the pivoted QR: column j of A*P is column pivot_order[j] of A.
  std::vector<Eigen::Index> pivot_order;
};

struct ConditionNumbers {
  double plain = 1.0;
  double augmented = 1.0;
};

/// Least squares via Householder QR of A. Throws SingularSystem when A has fewer
/// rows than columns or cond(A) >= 1/sqrt(eps) (A^T A numerically singular).
CoefficientMatrix solve_ols(const FourierDesign& design, const Matrix& values);

/// argmin ||AX - B||_F^2 + ||lambda X||_F^2, solved as least squares on the stacked
/// system [A; lambda I] X = [B; 0]. lambda == 0 defers to solve_ols.
CoefficientMatrix solve_tikhonov(const FourierDesign& design, const Matrix& values, double lambda);

/// 50 logarithmically spaced values from 1e-10 to 1.
std::vector<double> default_lambda_grid();

/// Logarithmically spaced grid with `count` points in [lo, hi].
std::vector<double> log_spaced_grid(double lo, double hi, std::size_t count);

/// Residual and solution norms across the grid plus the corner picked by the
/// triangle method on the log-log curve. Throws InvalidArgument for fewer than
/// four points or a grid that is not strictly ascending and positive.
LCurve l_curve(const FourierDesign& design, const Matrix& values, std::span<const double> lambda_grid);

/// Index of the L-curve corner from raw norms (ascending-lambda order).
/// Ties go to the larger lambda.
std::size_t triangle_knee(std::span<const double> residual_norms,
                          std::span<const double> solution_norms);

/// eps_p from the explicit residual AX - B.
double rms_error(const FourierDesign& design, const CoefficientMatrix& coefficients,
                 const Matrix& values);

/// eps_p of the least-squares minimizer written as vec(B)^T (I_M (x) (I_N - QQ^T)) vec(B) / NM
/// with Q the thin QR factor of A. Requires A with full column rank.
double rms_error_projected(const FourierDesign& design, const Matrix& values);

/// Singular values of A (min(N, 2k+1) of them, descending).
Vector singular_values(const FourierDesign& design);

/// Singular values of the stacked matrix [A; lambda I] (2k+1 of them, descending).
Vector augmented_singular_values(const FourierDesign& design, double lambda);

ConditionNumbers condition_numbers(const FourierDesign& design, double lambda);

/// Minimum Frobenius-norm least-squares solution from a column-pivoted QR of A
/// truncated at |R_ii| >= rank_tolerance * |R_00|. Works for tall, square, fat and
/// rank-deficient A. A zero matrix yields a zero solution and a warning.
MinNormSolution min_norm_solve(const FourierDesign& design, const Matrix& values,
                               double rank_tolerance = 1e-8);

/// Scales row i of A and B by weights[i] (a diagonal weight matrix W applied as WA, WB).
/// Throws InvalidArgument unless there is one positive finite weight per rake.
std::pair<FourierDesign, Matrix> apply_row_weights(const FourierDesign& design, const Matrix& values,
                                                   std::span<const double> weights);

}  // namespace annulus
