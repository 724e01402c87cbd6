#include "cramer/depth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "cramer/cramer.hpp"
#include "cramer/directions.hpp"
#include "cramer/errors.hpp"
#include "cramer/quadrature.hpp"

namespace cramer {

namespace {

class Prober {
 public:
  Prober(const MeasureModel& model, const Vector& x) : model_(model), x_(x) {}

  double operator()(const Vector& u) {
    ++evaluations_;
    const double v = model_.marginal(u).sf(x_.dot(u));
    if (v < best_) {
      best_ = v;
      best_u_ = u;
    }
    return v;
  }

  double best() const { return best_; }
  const Vector& best_direction() const { return best_u_; }
  int evaluations() const { return evaluations_; }

 private:
  const MeasureModel& model_;
  const Vector& x_;
  double best_ = 2.0;
  Vector best_u_;
  int evaluations_ = 0;
};

DepthResult sphere_depth(const MeasureModel& model, const Vector& x, const DepthOptions& opt) {
  const int n = model.dimension();
  Prober probe(model, x);
  DepthResult r;
  r.method = DepthMethod::SphereOptimization;
  if (n == 1) {
    probe(Vector::Constant(1, 1.0));
    probe(Vector::Constant(1, -1.0));
    r.value = probe.best();
    r.minimizing_direction = probe.best_direction();
    r.evaluations = probe.evaluations();
    return r;
  }

  std::vector<std::pair<double, Vector>> starts;
  auto add_start = [&](const Vector& u) { starts.emplace_back(probe(u), u); };
  if (opt.warm_direction && opt.warm_direction->size() == n && opt.warm_direction->norm() > 0)
    add_start(opt.warm_direction->normalized());
  if (x.norm() > 0) add_start(x.normalized());
  // product supports have their facet normals on the axes; a grid can miss them
  for (const Vector& u : axis_directions(model)) add_start(u);
  const int coarse = std::max(0, opt.coarse);
  for (const Vector& u : sphere_directions(n, static_cast<std::size_t>(coarse))) add_start(u);
  const std::size_t top = std::min(starts.size(), static_cast<std::size_t>(opt.refine_top));
  std::partial_sort(starts.begin(), starts.begin() + static_cast<std::ptrdiff_t>(top), starts.end(),
                    [](const auto& a, const auto& b) { return a.first < b.first; });

  // arc half-width comparable to the coarse grid spacing
  const double spacing =
      n == 2 ? std::numbers::pi / std::max(1, coarse / 2)
             : std::min(1.0, 2.5 * std::pow(std::max(coarse, 1), -1.0 / (n - 1)));
  for (std::size_t k = 0; k < top; ++k) {
    Vector u = starts[k].second;
    double fu = starts[k].first;
    double width = spacing;
    for (int sweep = 0; sweep < opt.sweeps; ++sweep, width *= 0.5) {
      for (const Vector& e : tangent_basis(u)) {
        auto neg = [&](double angle) { return -probe(geodesic(u, e, angle)); };
        const double angle = golden_section_argmax(neg, -width, width, opt.golden_steps);
        const Vector cand = geodesic(u, e, angle);
        const double fc = probe(cand);
        if (fc < fu) {
          u = cand;
          fu = fc;
        }
      }
    }
  }
  r.value = probe.best();
  r.minimizing_direction = probe.best_direction();
  r.evaluations = probe.evaluations();
  return r;
}

}  // namespace

std::string to_string(DepthMethod method) {
  return method == DepthMethod::ClosedForm ? "closed_form" : "sphere_optimization";
}

DepthResult depth(const MeasureModel& model, const Vector& x, const DepthOptions& opt) {
  if (x.size() != model.dimension()) throw InputError("depth: point length mismatch");
  if (!x.allFinite()) throw InputError("depth: non-finite point");
  const int n = model.dimension();

  if (const AffineMap* map = model.pushforward_map()) {
    // half-spaces pull back through the affine map: u -> T^T u
    DepthOptions inner = opt;
    if (opt.warm_direction && opt.warm_direction->size() == n)
      inner.warm_direction = Vector(map->matrix().transpose() * *opt.warm_direction);
    DepthResult r = depth(*model.pushforward_base(), map->invert(x), inner);
    const Vector pushed = map->matrix().transpose().partialPivLu().solve(r.minimizing_direction);
    r.minimizing_direction = pushed.normalized();
    return r;
  }

  if (opt.allow_closed_form && model.is_rotation_invariant()) {
    DepthResult r;
    r.method = DepthMethod::ClosedForm;
    const double norm = x.norm();
    r.minimizing_direction = norm > 0 ? Vector(x / norm) : Vector(Vector::Unit(n, 0));
    r.value = model.marginal(r.minimizing_direction).sf(norm);
    r.evaluations = 1;
    return r;
  }
  return sphere_depth(model, x, opt);
}

std::vector<double> depth_values(const MeasureModel& model, const Matrix& points,
                                 const DepthOptions& options, const Parallel& par) {
  return par.map<double>(static_cast<std::size_t>(points.cols()), [&](std::size_t i) {
    return depth(model, points.col(static_cast<Eigen::Index>(i)), options).value;
  });
}

DepthBoundsReport depth_cramer_bounds_check(const MeasureModel& model, const Vector& x,
                                            double epsilon, double tol,
                                            const DepthOptions& options) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InputError("epsilon must lie in (0, 1)");
  DepthBoundsReport r;
  r.depth = depth(model, x, options).value;
  r.cramer = cramer_value(model, x);
  r.upper = std::exp(-r.cramer);
  r.lower = std::log(epsilon) - (1.0 - epsilon) * std::log(2.0 * r.depth);
  r.upper_holds = r.depth <= r.upper + tol;
  r.lower_holds = r.cramer >= r.lower - tol;
  return r;
}

HeavyTailDiagnostic heavy_tail_diagnostic(std::vector<double> values) {
  HeavyTailDiagnostic d;
  const std::size_t n = values.size();
  const std::size_t k = std::max<std::size_t>(10, n / 100);
  if (n <= k + 1) return d;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k), values.end(),
                   std::greater<>());
  const double threshold = values[k];
  std::sort(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k), std::greater<>());
  if (!(threshold > 0.0)) return d;
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) sum += std::log(values[i] / threshold);
  const double xi = sum / static_cast<double>(k);
  d.tail_index = xi > 0.0 ? 1.0 / xi : std::numeric_limits<double>::infinity();
  d.divergent = d.tail_index <= 1.05;
  return d;
}

NegativeMomentReport negative_moment(const MeasureModel& model, double p, std::uint64_t seed,
                                     std::size_t samples, const Parallel& par,
                                     const DepthOptions& options) {
  if (!(p > 0.0)) throw InputError("negative_moment: p must be positive");
  if (samples < 100) throw InputError("negative_moment: at least 100 samples required");
  const Matrix pts = model.sample(seed, samples, par);
  const std::vector<double> phi = depth_values(model, pts, options, par);
  std::vector<double> y(samples);
  for (std::size_t i = 0; i < samples; ++i) y[i] = std::pow(phi[i], -p);

  NegativeMomentReport r;
  r.samples = samples;
  r.estimate = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(samples);

  // post-stratify by depth decile: var = sum_h W_h^2 s_h^2 / n_h
  std::vector<std::size_t> order(samples);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return phi[a] < phi[b];
  });
  double var = 0.0;
  constexpr int kStrata = 10;
  for (int h = 0; h < kStrata; ++h) {
    const std::size_t lo = samples * h / kStrata, hi = samples * (h + 1) / kStrata;
    const double nh = static_cast<double>(hi - lo);
    if (nh < 2) continue;
    double mean = 0.0;
    for (std::size_t i = lo; i < hi; ++i) mean += y[order[i]];
    mean /= nh;
    double ss = 0.0;
    for (std::size_t i = lo; i < hi; ++i) ss += (y[order[i]] - mean) * (y[order[i]] - mean);
    const double w = nh / static_cast<double>(samples);
    var += w * w * (ss / (nh - 1)) / nh;
  }
  r.stderr_ = std::sqrt(var);
  r.tail = heavy_tail_diagnostic(std::move(y));
  return r;
}

MeanEstimate depth_mean(const MeasureModel& model, std::uint64_t seed, std::size_t samples,
                        const Parallel& par, const DepthOptions& options) {
  if (samples < 2) throw InputError("depth_mean: at least 2 samples required");
  const Matrix pts = model.sample(seed, samples, par);
  const std::vector<double> phi = depth_values(model, pts, options, par);
  const double n = static_cast<double>(samples);
  const double mean = std::accumulate(phi.begin(), phi.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : phi) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1) / n)};
}

}  // namespace cramer
