#include <algorithm>
#include <cmath>
#include <vector>

#include "cramer/errors.hpp"
#include "cramer/polytopes.hpp"

namespace cramer {

namespace {

constexpr long kMaxPivots = 100000;
constexpr double kPivotEps = 1e-12;

}  // namespace

bool convex_combination_feasible(const Matrix& vertices, const Vector& x, double tol) {
  const Eigen::Index n = vertices.rows();
  const Eigen::Index N = vertices.cols();
  if (x.size() != n) throw InputError("feasibility: point length mismatch");
  if (N == 0) return false;
  const Eigen::Index m = n + 1;
  const Eigen::Index cols = N + m;  // structural, then artificial
  const Eigen::Index rhs = cols;

  // rows: V lambda = x, 1^T lambda = 1, each made nonnegative on the right
  Matrix T = Matrix::Zero(m + 1, cols + 1);
  T.block(0, 0, n, N) = vertices;
  T.block(n, 0, 1, N).setOnes();
  T.block(0, rhs, n, 1) = x;
  T(n, rhs) = 1.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (T(i, rhs) < 0.0) {
      T.row(i).head(N) *= -1.0;
      T(i, rhs) *= -1.0;
    }
    T(i, N + i) = 1.0;
  }
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = N + i;
  // phase-1 reduced costs: minimize the sum of the artificials
  for (Eigen::Index i = 0; i < m; ++i) T.row(m) -= T.row(i);
  for (Eigen::Index i = 0; i < m; ++i) T(m, N + i) = 0.0;

  for (long pivots = 0;; ++pivots) {
    if (pivots >= kMaxPivots) throw NumericError("simplex: pivot limit exceeded");
    // Bland: lowest-index improving column (artificials never re-enter)
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < N; ++j)
      if (T(m, j) < -kPivotEps) {
        enter = j;
        break;
      }
    if (enter < 0) break;
    Eigen::Index leave = -1;
    double best = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      const double a = T(i, enter);
      if (a <= kPivotEps) continue;
      const double ratio = T(i, rhs) / a;
      if (leave < 0 || ratio < best ||
          (ratio == best && basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave < 0) throw NumericError("simplex: unbounded phase-1 problem");
    T.row(leave) /= T(leave, enter);
    for (Eigen::Index i = 0; i <= m; ++i)
      if (i != leave && T(i, enter) != 0.0) T.row(i) -= T(i, enter) * T.row(leave);
    basis[static_cast<std::size_t>(leave)] = enter;
  }

  Vector lambda = Vector::Zero(N);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index b = basis[static_cast<std::size_t>(i)];
    if (b < N) lambda(b) = std::max(0.0, T(i, rhs));
  }
  const double residual = std::max((vertices * lambda - x).cwiseAbs().maxCoeff(),
                                   std::abs(lambda.sum() - 1.0));
  return residual <= tol;
}

}  // namespace cramer
