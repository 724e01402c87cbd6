#include "cramer/polytopes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cramer/bodies.hpp"
#include "cramer/directions.hpp"
#include "cramer/moments.hpp"
#include "cramer/rng.hpp"

namespace cramer {

namespace {

constexpr int kMaxResamples = 100;

double cross(const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

std::vector<Eigen::Vector2d> monotone_chain(const Matrix& v) {
  std::vector<Eigen::Vector2d> p(static_cast<std::size_t>(v.cols()));
  for (Eigen::Index i = 0; i < v.cols(); ++i) p[static_cast<std::size_t>(i)] = v.col(i);
  std::sort(p.begin(), p.end(), [](const auto& a, const auto& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  std::vector<Eigen::Vector2d> hull(2 * p.size());
  std::size_t k = 0;
  for (const auto& q : p) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], q) <= 0) --k;
    hull[k++] = q;
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], p[i]) <= 0) --k;
    hull[k++] = p[i];
  }
  hull.resize(k - 1);
  return hull;
}

}  // namespace

bool affinely_spanning(const Matrix& vertices) {
  const Eigen::Index n = vertices.rows();
  if (vertices.cols() <= n) return false;
  const Matrix d = vertices.rightCols(vertices.cols() - 1).colwise() - vertices.col(0);
  Eigen::ColPivHouseholderQR<Matrix> qr(d);
  qr.setThreshold(1e-10);
  return qr.rank() == n;
}

HullInstance::HullInstance(Matrix vertices) : vertices_(std::move(vertices)) {
  if (!affinely_spanning(vertices_)) throw InputError("hull vertices do not affinely span R^n");
  if (dimension() == 1) {
    lo_ = vertices_.minCoeff();
    hi_ = vertices_.maxCoeff();
  } else if (dimension() == 2) {
    polygon_ = monotone_chain(vertices_);
  }
}

bool HullInstance::contains(const Vector& x, double tol) const {
  if (x.size() != dimension()) throw InputError("hull membership: point length mismatch");
  if (dimension() == 1) return x(0) >= lo_ - tol && x(0) <= hi_ + tol;
  if (dimension() == 2) {
    const Eigen::Vector2d q = x;
    const std::size_t h = polygon_.size();
    for (std::size_t i = 0; i < h; ++i) {
      const Eigen::Vector2d& a = polygon_[i];
      const Eigen::Vector2d& b = polygon_[(i + 1) % h];
      // signed distance of q to the edge line, positive inside
      if (cross(a, b, q) < -tol * (b - a).norm()) return false;
    }
    return true;
  }
  return convex_combination_feasible(vertices_, x, tol);
}

PolytopeDraw draw_vertices(const MeasureModel& model, std::size_t N, std::uint64_t seed,
                           std::uint64_t rep) {
  if (N <= static_cast<std::size_t>(model.dimension()))
    throw InputError("random polytope needs N > n vertices");
  PolytopeDraw d;
  for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
    const std::uint64_t s = derive_seed(derive_seed(seed, rep), static_cast<std::uint64_t>(attempt));
    d.vertices = model.sample(s, N);
    if (affinely_spanning(d.vertices)) return d;
    ++d.resampled;
  }
  throw NumericError("random polytope: vertices stayed affinely degenerate");
}

PolytopeMeasure expected_measure(const MeasureModel& model, std::size_t N, std::size_t reps,
                                 std::size_t test_points, std::uint64_t seed,
                                 const Parallel& par) {
  if (reps < 1) throw InputError("expected_measure: reps must be >= 1");
  if (test_points < 1) throw InputError("expected_measure: test_points must be >= 1");
  struct Rep {
    double fraction = 0.0;
    std::size_t resampled = 0;
  };
  const std::vector<Rep> per = par.map<Rep>(reps, [&](std::size_t r) {
    const PolytopeDraw d = draw_vertices(model, N, derive_seed(seed, 1), r);
    const HullInstance hull(d.vertices);
    const Matrix pts = model.sample(derive_seed(derive_seed(seed, 2), r), test_points);
    std::size_t inside = 0;
    for (Eigen::Index i = 0; i < pts.cols(); ++i) inside += hull.contains(pts.col(i));
    return Rep{static_cast<double>(inside) / static_cast<double>(test_points), d.resampled};
  });
  PolytopeMeasure m;
  m.reps = reps;
  m.test_points = test_points;
  double sum = 0.0;
  for (const Rep& r : per) {
    sum += r.fraction;
    m.resampled += r.resampled;
  }
  m.estimate = sum / static_cast<double>(reps);
  if (reps > 1) {
    double ss = 0.0;
    for (const Rep& r : per) ss += (r.fraction - m.estimate) * (r.fraction - m.estimate);
    m.stderr_ = std::sqrt(ss / static_cast<double>(reps - 1) / static_cast<double>(reps));
  } else {
    m.stderr_ = std::sqrt(m.estimate * (1.0 - m.estimate) / static_cast<double>(test_points));
  }
  return m;
}

std::vector<double> isotonic_fit(const std::vector<double>& values) {
  struct Block {
    double sum;
    std::size_t count;
  };
  std::vector<Block> blocks;
  for (double v : values) {
    blocks.push_back({v, 1});
    while (blocks.size() > 1) {
      const Block& b = blocks.back();
      const Block& a = blocks[blocks.size() - 2];
      if (a.sum / a.count <= b.sum / b.count) break;
      Block merged{a.sum + b.sum, a.count + b.count};
      blocks.pop_back();
      blocks.back() = merged;
    }
  }
  std::vector<double> out;
  out.reserve(values.size());
  for (const Block& b : blocks) out.insert(out.end(), b.count, b.sum / b.count);
  return out;
}

ThresholdReport threshold_scan(const MeasureModel& model, double delta,
                               const std::vector<double>& log_n_grid, std::size_t reps,
                               std::size_t test_points, std::uint64_t seed,
                               std::size_t tau_samples, const Parallel& par) {
  if (!(delta > 0.0 && delta < 0.5)) throw InputError("threshold: delta must lie in (0, 1/2)");
  if (log_n_grid.empty()) throw InputError("threshold: empty grid");
  for (std::size_t i = 1; i < log_n_grid.size(); ++i)
    if (!(log_n_grid[i] > log_n_grid[i - 1])) throw InputError("threshold: grid must increase");
  ThresholdReport r;
  r.delta = delta;
  const MomentReport tau = lp_moment(model, 1.0, derive_seed(seed, 3), tau_samples,
                                     MomentEstimator::DirectMC, par);
  r.tau = tau.estimate;
  r.tau_stderr = tau.stderr_;
  std::vector<double> raw;
  for (double ln_n : log_n_grid) {
    ThresholdPoint p;
    p.log_n = ln_n;
    p.N = static_cast<std::size_t>(std::llround(std::exp(ln_n)));
    // shared seed across the grid: vertex prefixes and test points are coupled
    const PolytopeMeasure m = expected_measure(model, p.N, reps, test_points, seed, par);
    p.estimate = m.estimate;
    p.stderr_ = m.stderr_;
    raw.push_back(m.estimate);
    r.grid.push_back(p);
  }
  const std::vector<double> fit = isotonic_fit(raw);
  for (std::size_t i = 0; i < fit.size(); ++i) r.grid[i].smoothed = fit[i];

  // the fit is nondecreasing, so "all up to" and "all beyond" reduce to one comparison
  bool has1 = false, has2 = false;
  for (std::size_t i = 0; i < fit.size(); ++i)
    if (fit[i] <= delta) r.rho1 = log_n_grid[i], has1 = true;
  for (std::size_t i = fit.size(); i-- > 0;)
    if (fit[i] >= 1.0 - delta) r.rho2 = log_n_grid[i], has2 = true;
  r.bracketed = has1 && has2;
  if (!r.bracketed) {
    throw ThresholdRangeError(std::string("threshold grid does not reach ") +
                                  (has1 ? "1 - delta" : "delta"),
                              r);
  }
  r.window = r.rho2 - r.rho1;
  // tau is a Monte-Carlo mean; compare within 3 standard errors
  const double slack = 3.0 * r.tau_stderr;
  r.tau_inside = r.rho1 <= r.tau + slack && r.tau - slack <= r.rho2;
  return r;
}

CoveringReport covering_bound_check(const MeasureModel& model, double s, std::size_t N,
                                    std::size_t reps, std::uint64_t seed,
                                    std::size_t directions, const Parallel& par) {
  if (!(s > 0.0)) throw InputError("covering: s must be positive");
  if (reps < 1) throw InputError("covering: reps must be >= 1");
  const int n = model.dimension();
  CoveringReport r;
  r.s = s;
  r.N = N;
  r.reps = reps;
  r.boundary_points = directions;
  r.semantics = "containment of the radial points of T_s in " + std::to_string(directions) +
                " directions (necessary condition for containing T_s)";
  const std::vector<Vector> dirs = sphere_directions(n, directions);
  Matrix boundary(n, static_cast<Eigen::Index>(dirs.size()));
  for (std::size_t i = 0; i < dirs.size(); ++i)
    boundary.col(static_cast<Eigen::Index>(i)) = radial(model, {Family::T, s}, dirs[i]) * dirs[i];

  const std::vector<char> ok = par.map<char>(reps, [&](std::size_t rep) -> char {
    const HullInstance hull(draw_vertices(model, N, seed, rep).vertices);
    for (Eigen::Index j = 0; j < boundary.cols(); ++j)
      if (!hull.contains(boundary.col(j))) return 0;
    return 1;
  });
  const double k = static_cast<double>(std::count(ok.begin(), ok.end(), 1));
  r.contained = k / static_cast<double>(reps);
  r.stderr_ = std::sqrt(r.contained * (1.0 - r.contained) / static_cast<double>(reps));
  const double log_bound = std::log(2.0) + std::lgamma(N + 1.0) - std::lgamma(n + 1.0) -
                           std::lgamma(static_cast<double>(N) - n + 1.0) +
                           (static_cast<double>(N) - n) * std::log1p(-std::exp(-s));
  r.bound = std::min(1.0, std::exp(log_bound));
  r.holds = 1.0 - r.contained <= r.bound + 3.0 * r.stderr_;
  return r;
}

}  // namespace cramer
