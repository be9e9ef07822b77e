#include "annulus/solvers.hpp"

#include "annulus/errors.hpp"
#include "annulus/log.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace annulus {
namespace {

void require_shape(const FourierDesign& design, const Matrix& values) {
  if (values.rows() != design.rows()) {
    std::ostringstream os;
    os << "value matrix has " << values.rows() << " rows but the design has " << design.rows();
    throw InvalidArgument(os.str());
  }
}

double condition_from(const Vector& sv) {
  if (sv.size() == 0) return std::numeric_limits<double>::infinity();
  const double smax = sv.maxCoeff();
  const double smin = sv.minCoeff();
  if (smax == 0.0) return std::numeric_limits<double>::infinity();
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

}  // namespace

CoefficientMatrix solve_ols(const FourierDesign& design, const Matrix& values) {
  require_shape(design, values);
  if (design.rows() < design.cols()) {
    std::ostringstream os;
    os << "least squares needs at least as many rakes as unknowns (" << design.rows() << " < "
       << design.cols() << "); use solve_tikhonov or min_norm_solve";
    throw SingularSystem(os.str());
  }
  const double cond = condition_from(singular_values(design));
  const double limit = 1.0 / std::sqrt(std::numeric_limits<double>::epsilon());
  if (!(cond < limit)) {
    std::ostringstream os;
    os << "design matrix is numerically rank deficient (cond = " << cond
       << "); use solve_tikhonov or min_norm_solve";
    throw SingularSystem(os.str());
  }
  Eigen::HouseholderQR<Matrix> qr(design.matrix);
  return CoefficientMatrix{qr.solve(values), design.harmonics};
}

CoefficientMatrix solve_tikhonov(const FourierDesign& design, const Matrix& values, double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw InvalidArgument("regularization parameter must be finite and >= 0");
  }
  if (lambda == 0.0) return solve_ols(design, values);
  require_shape(design, values);
  const Eigen::Index n = design.rows();
  const Eigen::Index p = design.cols();
  Matrix stacked(n + p, p);
  stacked.topRows(n) = design.matrix;
  stacked.bottomRows(p) = lambda * Matrix::Identity(p, p);
  Matrix rhs = Matrix::Zero(n + p, values.cols());
  rhs.topRows(n) = values;
  Eigen::HouseholderQR<Matrix> qr(stacked);
  return CoefficientMatrix{qr.solve(rhs), design.harmonics};
}

std::vector<double> log_spaced_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) {
    throw InvalidArgument("log-spaced grid needs 0 < lo < hi and at least two points");
  }
  std::vector<double> grid(count);
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t i = 0; i < count; ++i) {
    grid[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

std::vector<double> default_lambda_grid() { return log_spaced_grid(1e-10, 1.0, 50); }

std::size_t triangle_knee(std::span<const double> residual_norms,
                          std::span<const double> solution_norms) {
  const std::size_t n = residual_norms.size();
  if (n != solution_norms.size() || n < 4) {
    throw InvalidArgument("L-curve corner needs at least four (residual, solution) pairs");
  }
  constexpr double floor = 1e-300;
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = std::log10(std::max(residual_norms[i], floor));
    y[i] = std::log10(std::max(solution_norms[i], floor));
  }
  const double extent = std::hypot(*std::max_element(x.begin(), x.end()) -
                                       *std::min_element(x.begin(), x.end()),
                                   *std::max_element(y.begin(), y.end()) -
                                       *std::min_element(y.begin(), y.end()));
  const double min_edge = 1e-12 * std::max(extent, 1.0);

  // Corner = vertex k of the sharpest convex triangle (P_j, P_k, P_last), j < k.
  const std::size_t last = n - 1;
  double best_cos = -2.0;
  std::size_t best = n;
  for (std::size_t k = 1; k < last; ++k) {
    const double vx = x[last] - x[k];
    const double vy = y[last] - y[k];
    const double vlen = std::hypot(vx, vy);
    if (vlen <= min_edge) continue;
    for (std::size_t j = 0; j < k; ++j) {
      const double ux = x[j] - x[k];
      const double uy = y[j] - y[k];
      const double ulen = std::hypot(ux, uy);
      if (ulen <= min_edge) continue;
      // turn P_j -> P_k -> P_last must bend toward the origin
      const double cross = (-ux) * vy - (-uy) * vx;
      if (cross <= 0.0) continue;
      const double cosine = (ux * vx + uy * vy) / (ulen * vlen);
      if (cosine >= best_cos) {
        best_cos = cosine;
        best = k;
      }
    }
  }
  if (best < n) return best;

  // No convex corner: fall back to the point farthest below the end-to-end chord.
  const double cx = x[last] - x[0];
  const double cy = y[last] - y[0];
  double best_dist = -std::numeric_limits<double>::infinity();
  best = last;
  for (std::size_t k = 0; k < n; ++k) {
    const double d = cx * (y[k] - y[0]) - cy * (x[k] - x[0]);
    if (-d >= best_dist) {
      best_dist = -d;
      best = k;
    }
  }
  return best;
}

LCurve l_curve(const FourierDesign& design, const Matrix& values,
               std::span<const double> lambda_grid) {
  if (lambda_grid.size() < 4) throw InvalidArgument("L-curve needs at least four lambda values");
  for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
    if (!(lambda_grid[i] > 0.0) || !std::isfinite(lambda_grid[i]) ||
        (i > 0 && !(lambda_grid[i] > lambda_grid[i - 1]))) {
      throw InvalidArgument("lambda grid must be positive and strictly ascending");
    }
  }
  LCurve curve;
  curve.lambdas.assign(lambda_grid.begin(), lambda_grid.end());
  for (double lambda : lambda_grid) {
    const auto x = solve_tikhonov(design, values, lambda);
    curve.residual_norms.push_back((design.matrix * x.matrix - values).norm());
    curve.solution_norms.push_back(x.frobenius_norm());
  }
  curve.knee_index = triangle_knee(curve.residual_norms, curve.solution_norms);
  return curve;
}

double rms_error(const FourierDesign& design, const CoefficientMatrix& coefficients,
                 const Matrix& values) {
  require_shape(design, values);
  const auto count = static_cast<double>(values.size());
  if (count == 0.0) return 0.0;
  return std::sqrt((design.matrix * coefficients.matrix - values).squaredNorm() / count);
}

double rms_error_projected(const FourierDesign& design, const Matrix& values) {
  require_shape(design, values);
  const Eigen::Index n = design.rows();
  const Eigen::Index p = design.cols();
  if (n < p) throw SingularSystem("projection form needs a tall design matrix");
  Eigen::HouseholderQR<Matrix> qr(design.matrix);
  const Matrix q = qr.householderQ() * Matrix::Identity(n, p);
  const Matrix projector = Matrix::Identity(n, n) - q * q.transpose();
  // I_M (x) P is block diagonal, so the quadratic form splits per probe column.
  // P is a symmetric projector: b^T P b = ||P b||^2, which avoids cancellation.
  double total = 0.0;
  for (Eigen::Index j = 0; j < values.cols(); ++j) {
    total += (projector * values.col(j)).squaredNorm();
  }
  return std::sqrt(total / static_cast<double>(values.size()));
}

Vector singular_values(const FourierDesign& design) {
  Eigen::JacobiSVD<Matrix> svd(design.matrix);
  return svd.singularValues();
}

Vector augmented_singular_values(const FourierDesign& design, double lambda) {
  const Eigen::Index n = design.rows();
  const Eigen::Index p = design.cols();
  Matrix stacked(n + p, p);
  stacked.topRows(n) = design.matrix;
  stacked.bottomRows(p) = lambda * Matrix::Identity(p, p);
  Eigen::JacobiSVD<Matrix> svd(stacked);
  return svd.singularValues();
}

ConditionNumbers condition_numbers(const FourierDesign& design, double lambda) {
  ConditionNumbers out;
  out.plain = condition_from(singular_values(design));
  out.augmented = lambda == 0.0 ? out.plain : condition_from(augmented_singular_values(design, lambda));
  return out;
}

MinNormSolution min_norm_solve(const FourierDesign& design, const Matrix& values,
                               double rank_tolerance) {
  require_shape(design, values);
  if (!(rank_tolerance >= 0.0)) throw InvalidArgument("rank tolerance must be >= 0");
  const Eigen::Index n = design.rows();
  const Eigen::Index p = design.cols();

  Eigen::ColPivHouseholderQR<Matrix> qr(design.matrix);
  const Matrix& packed = qr.matrixQR();
  const auto& perm = qr.colsPermutation().indices();

  MinNormSolution out{CoefficientMatrix{Matrix::Zero(p, values.cols()), design.harmonics}, 0,
                      std::vector<Eigen::Index>(perm.data(), perm.data() + perm.size())};

  const Eigen::Index diag = std::min(n, p);
  const double lead = diag > 0 ? std::abs(packed(0, 0)) : 0.0;
  Eigen::Index rank = 0;
  if (lead > 0.0) {
    while (rank < diag && std::abs(packed(rank, rank)) >= rank_tolerance * lead) ++rank;
  }
  out.numerical_rank = static_cast<std::size_t>(rank);
  if (rank == 0) {
    log::warn("design matrix has numerical rank 0; returning the zero solution");
    return out;
  }

  // A P = [Q1 Q2] [R11 R12; 0 0]. Keep the leading block row T = [R11 R12].
  const Matrix q1 = qr.householderQ() * Matrix::Identity(n, rank);
  Matrix t = packed.topRows(rank);
  t.triangularView<Eigen::StrictlyLower>().setZero();
  const Matrix c = q1.transpose() * values;

  // R11^{-1} Q1^T B alone is only a basic solution; the minimum-norm one comes from
  // a second QR of T^T = Z S, giving y = Z S^{-T} c.
  Eigen::HouseholderQR<Matrix> qz(t.transpose());
  const Matrix z = qz.householderQ() * Matrix::Identity(p, rank);
  const Matrix s = qz.matrixQR().topRows(rank).triangularView<Eigen::Upper>();
  const Matrix w = s.transpose().triangularView<Eigen::Lower>().solve(c);
  const Matrix y = z * w;

  for (Eigen::Index j = 0; j < p; ++j) out.coefficients.matrix.row(perm(j)) = y.row(j);
  return out;
}

std::pair<FourierDesign, Matrix> apply_row_weights(const FourierDesign& design, const Matrix& values,
                                                   std::span<const double> weights) {
  require_shape(design, values);
  if (weights.size() != static_cast<std::size_t>(design.rows())) {
    throw InvalidArgument("row weights need one entry per rake");
  }
  FourierDesign weighted = design;
  Matrix scaled = values;
  weighted.row_weights.assign(weights.begin(), weights.end());
  for (Eigen::Index i = 0; i < design.rows(); ++i) {
    const double w = weights[static_cast<std::size_t>(i)];
    if (!(w > 0.0) || !std::isfinite(w)) throw InvalidArgument("row weights must be positive");
    weighted.matrix.row(i) *= w;
    scaled.row(i) *= w;
  }
  return {std::move(weighted), std::move(scaled)};
}

}  // namespace annulus
