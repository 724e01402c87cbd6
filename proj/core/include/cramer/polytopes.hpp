#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cramer/errors.hpp"
#include "cramer/measures.hpp"
#include "cramer/parallel.hpp"

namespace cramer {

/// Phase-1 dense simplex with Bland's rule: does lambda >= 0, sum lambda = 1,
/// V lambda = x have a solution? Feasibility is confirmed by a residual below
/// `tol`. Throws NumericError after 1e5 pivots.
bool convex_combination_feasible(const Matrix& vertices, const Vector& x, double tol = 1e-9);

/// conv of the columns of `vertices`. Dimensions 1 and 2 use the exact hull
/// (interval, monotone-chain polygon); higher dimensions solve the feasibility
/// problem per query.
class HullInstance {
 public:
  /// Throws InputError unless the vertices affinely span R^n.
  explicit HullInstance(Matrix vertices);

  int dimension() const { return static_cast<int>(vertices_.rows()); }
  std::size_t size() const { return static_cast<std::size_t>(vertices_.cols()); }
  const Matrix& vertices() const { return vertices_; }
  bool contains(const Vector& x, double tol = 1e-9) const;

 private:
  Matrix vertices_;
  double lo_ = 0.0, hi_ = 0.0;
  /// Counter-clockwise polygon for n = 2.
  std::vector<Eigen::Vector2d> polygon_;
};

/// True when the columns affinely span R^n.
bool affinely_spanning(const Matrix& vertices);

struct PolytopeDraw {
  Matrix vertices;
  /// Redraws caused by affinely degenerate vertex sets.
  std::size_t resampled = 0;
};

/// N vertices from the stream derived from (seed, rep). Prefixes are shared:
/// the first N columns do not depend on a larger N.
PolytopeDraw draw_vertices(const MeasureModel& model, std::size_t N, std::uint64_t seed,
                           std::uint64_t rep);

struct PolytopeMeasure {
  double estimate = 0.0;
  /// Standard error across repetitions (covers both sampling stages).
  double stderr_ = 0.0;
  std::size_t reps = 0;
  std::size_t test_points = 0;
  std::size_t resampled = 0;
};

/// E mu(K_N): per repetition the membership frequency of fresh test points.
PolytopeMeasure expected_measure(const MeasureModel& model, std::size_t N, std::size_t reps,
                                 std::size_t test_points, std::uint64_t seed,
                                 const Parallel& par = {});

/// Pool-adjacent-violators fit of a nondecreasing sequence (equal weights).
std::vector<double> isotonic_fit(const std::vector<double>& values);

struct ThresholdPoint {
  double log_n = 0.0;
  std::size_t N = 0;
  double estimate = 0.0;
  double stderr_ = 0.0;
  double smoothed = 0.0;
};

struct ThresholdReport {
  double delta = 0.0;
  std::vector<ThresholdPoint> grid;
  double rho1 = 0.0;
  double rho2 = 0.0;
  double tau = 0.0;
  double tau_stderr = 0.0;
  double window = 0.0;
  bool bracketed = false;
  bool tau_inside = false;
};

/// Thrown when the grid misses either threshold; carries the partial report.
class ThresholdRangeError : public RangeError {
 public:
  ThresholdRangeError(const std::string& what, ThresholdReport partial)
      : RangeError(what), partial_(std::move(partial)) {}
  const ThresholdReport& partial() const { return partial_; }

 private:
  ThresholdReport partial_;
};

/// E mu(K_N) on N = round(e^{lnN}); rho1 is the largest grid lnN up to which
/// the isotonic fit stays <= delta, rho2 the smallest from which it stays
/// >= 1 - delta. tau = E Lambda* from `tau_samples` draws; tau_inside allows
/// 3 standard errors of tau on each side.
ThresholdReport threshold_scan(const MeasureModel& model, double delta,
                               const std::vector<double>& log_n_grid, std::size_t reps,
                               std::size_t test_points, std::uint64_t seed,
                               std::size_t tau_samples = 100000, const Parallel& par = {});

struct CoveringReport {
  double s = 0.0;
  std::size_t N = 0;
  std::size_t reps = 0;
  std::size_t boundary_points = 0;
  /// Fraction of repetitions whose hull contains every boundary point of T_s.
  double contained = 0.0;
  double stderr_ = 0.0;
  /// 2 C(N, n) (1 - e^{-s})^{N - n}, capped at 1 for reporting.
  double bound = 0.0;
  bool holds = true;
  std::string semantics;
};

/// P(K_N contains T_s) against the binomial covering bound, where containment is
/// tested on the radial points of T_s in `directions` unit directions.
CoveringReport covering_bound_check(const MeasureModel& model, double s, std::size_t N,
                                    std::size_t reps, std::uint64_t seed,
                                    std::size_t directions = 128, const Parallel& par = {});

}  // namespace cramer
