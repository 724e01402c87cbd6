#include "cramer/floating.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cramer/errors.hpp"
#include "cramer/rng.hpp"

namespace cramer {

namespace {

const double kDiskRadius = 1.0 / std::sqrt(std::numbers::pi);

void require_grid(const std::vector<double>& s_grid) {
  if (s_grid.empty()) throw InputError("s grid is empty");
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    if (!(s_grid[i] > 0.0)) throw InputError("s grid must be positive");
    if (i > 0 && !(s_grid[i] > s_grid[i - 1])) throw InputError("s grid must increase");
  }
}

}  // namespace

bool is_uniform_body(const MeasureModel& model) {
  const MeasureModel* base = model.pushforward_base();
  const ModelKind kind = base ? base->kind() : model.kind();
  return kind == ModelKind::UniformBall || kind == ModelKind::UniformCube;
}

TailCurve tail_curve(const MeasureModel& model, const std::vector<double>& s_grid,
                     std::uint64_t seed, std::size_t samples, const Parallel& par,
                     const DepthOptions& options) {
  require_grid(s_grid);
  if (samples < 2) throw InputError("tail_curve: at least 2 samples required");
  const Matrix pts = model.sample(seed, samples, par);
  const std::vector<double> phi = depth_values(model, pts, options, par);
  const int n = model.dimension();
  TailCurve c;
  c.uniform_body = is_uniform_body(model);
  for (double s : s_grid) {
    const double level = std::exp(-s);
    const auto out = std::count_if(phi.begin(), phi.end(), [&](double v) { return v < level; });
    TailPoint p;
    p.s = s;
    p.tail = static_cast<double>(out) / static_cast<double>(samples);
    p.stderr_ = std::sqrt(p.tail * (1.0 - p.tail) / static_cast<double>(samples));
    p.rescaled = p.tail * std::exp(c.uniform_body ? 2.0 * s / (n + 1) : s / (8.0 * n));
    c.points.push_back(p);
  }
  return c;
}

namespace {

// x - sin x, by its series where the difference cancels
double x_minus_sin(double x) {
  if (x > 0.5) return x - std::sin(x);
  const double x2 = x * x;
  double term = x * x2 / 6.0, sum = 0.0;
  for (int k = 1; k < 12; ++k) {
    sum += term;
    term *= -x2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
  }
  return sum;
}

// cap area by its height h = R - d; the half angle comes from asin, which stays
// accurate near the rim where acos(d / R) does not
double cap_area_from_height(double h) {
  const double R = kDiskRadius;
  if (h <= 0.0) return 0.0;
  if (h >= R) return 0.5;
  const double theta = 2.0 * std::asin(std::sqrt(h / (2.0 * R)));
  return 0.5 * R * R * x_minus_sin(2.0 * theta);
}

}  // namespace

double disk_cap_area(double d) {
  if (d <= 0.0) return 0.5;
  return cap_area_from_height(kDiskRadius - d);
}

double disk_floating_radius(double s) {
  const double level = std::exp(-s);
  if (level >= 0.5) return 0.0;
  double lo = 0.0, hi = kDiskRadius;
  for (int i = 0; i < 2000 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (cap_area_from_height(mid) >= level) hi = mid;
    else lo = mid;
  }
  return kDiskRadius - 0.5 * (lo + hi);
}

double disk_asa_target() {
  // (1/2) (3 / omega_1)^{2/3} as(K), omega_1 = 2, as(K) = 2 pi r^{2/3}, r = pi^{-1/2}
  const double r = kDiskRadius;
  const double as = 2.0 * std::numbers::pi * std::cbrt(r * r);
  return 0.5 * std::cbrt(1.5 * 1.5) * as;
}

LimitFit fit_exponential_limit(const std::vector<double>& s, const std::vector<double>& y,
                               const std::vector<double>& se, double rate_min,
                               double rate_max) {
  if (s.size() != y.size() || s.size() != se.size() || s.size() < 3)
    throw InputError("limit fit needs at least 3 points");
  if (!(rate_min > 0.0) || !(rate_max >= rate_min)) throw InputError("limit fit: bad rate range");
  LimitFit best;
  double best_sse = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= 400; ++k) {
    const double b = rate_min * std::pow(rate_max / rate_min, k / 400.0);
    // weighted normal equations for (L, a) with basis (1, e^{-b s})
    double s11 = 0, s12 = 0, s22 = 0, r1 = 0, r2 = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double w = se[i] > 0 ? 1.0 / (se[i] * se[i]) : 1.0;
      const double e = std::exp(-b * s[i]);
      s11 += w;
      s12 += w * e;
      s22 += w * e * e;
      r1 += w * y[i];
      r2 += w * e * y[i];
    }
    const double det = s11 * s22 - s12 * s12;
    if (!(std::abs(det) > 1e-300)) continue;
    const double L = (r1 * s22 - r2 * s12) / det;
    const double a = (s11 * r2 - s12 * r1) / det;
    double sse = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double w = se[i] > 0 ? 1.0 / (se[i] * se[i]) : 1.0;
      const double d = y[i] - L - a * std::exp(-b * s[i]);
      sse += w * d * d;
    }
    if (sse < best_sse) {
      best_sse = sse;
      best = {L, a, b};
    }
  }
  return best;
}

DiskAsaReport disk_asa_limit_check(const std::vector<double>& s_grid, std::uint64_t seed,
                                   std::size_t samples, double tolerance, const Parallel& par) {
  require_grid(s_grid);
  if (samples < 100) throw InputError("disk check: at least 100 samples per grid point");
  const double R = kDiskRadius;
  DiskAsaReport r;
  r.target = disk_asa_target();
  const std::size_t chunks = chunk_count(samples);
  for (std::size_t g = 0; g < s_grid.size(); ++g) {
    const double s = s_grid[g];
    const double level = std::exp(-s);
    // annulus [d_in, R] strictly containing the region outside T_s
    const double d_s = disk_floating_radius(s);
    const double d_in = std::max(0.0, R - 2.0 * (R - d_s));
    const double annulus = std::numbers::pi * (R * R - d_in * d_in);
    const std::vector<std::size_t> hits = par.map<std::size_t>(chunks, [&](std::size_t c) {
      RandomStream rng(derive_seed(seed, g), c);
      const std::size_t count = std::min(kChunkSize, samples - c * kChunkSize);
      std::size_t out = 0;
      for (std::size_t i = 0; i < count; ++i) {
        // uniform on the annulus: radius by inverse CDF of r^2
        const double u = rng.uniform();
        const double d = std::sqrt(d_in * d_in + u * (R * R - d_in * d_in));
        rng.uniform();  // angle; depth is rotation invariant
        out += disk_cap_area(d) < level;
      }
      return out;
    });
    std::size_t total = 0;
    for (std::size_t h : hits) total += h;
    const double frac = static_cast<double>(total) / static_cast<double>(samples);
    TailPoint p;
    p.s = s;
    p.tail = annulus * frac;
    p.stderr_ = annulus * std::sqrt(frac * (1.0 - frac) / static_cast<double>(samples));
    p.rescaled = std::exp(2.0 * s / 3.0) * p.tail;
    r.points.push_back(p);
    r.sharp_rescaled.push_back(std::exp(2.0 * s) * p.tail);
  }
  std::vector<double> fs, fy, fe;
  for (std::size_t i = r.points.size() / 2; i < r.points.size(); ++i) {
    fs.push_back(r.points[i].s);
    fy.push_back(r.points[i].rescaled);
    fe.push_back(std::exp(2.0 * r.points[i].s / 3.0) * r.points[i].stderr_);
  }
  if (fs.size() >= 3) {
    // The cap area is c h^{3/2} (1 + O(h)) with h ~ e^{-2s/3}, so the correction decays
    // near rate 2/3. A free rate chases noise in the top grid points.
    r.fit = fit_exponential_limit(fs, fy, fe, 1.0 / 3.0, 4.0 / 3.0);
  } else {
    r.fit.limit = fy.back();
  }
  r.relative_error = std::abs(r.fit.limit - r.target) / r.target;
  r.within_tolerance = r.relative_error <= tolerance;
  r.sharpness_grows = r.sharp_rescaled.back() > r.sharp_rescaled.front();
  return r;
}

TMeasureReport t_measure_bound_check(const MeasureModel& model, const std::vector<double>& s_grid,
                                     std::uint64_t seed, std::size_t samples,
                                     const Parallel& par, const DepthOptions& options) {
  const int n = model.dimension();
  const TailCurve curve = tail_curve(model, s_grid, seed, samples, par, options);
  TMeasureReport r;
  r.model = model.name();
  r.n = n;
  r.bound = std::exp(n * std::log(static_cast<double>(n)) / 8.0);
  r.empirical_exponent = std::numeric_limits<double>::infinity();
  for (TailPoint p : curve.points) {
    const double factor = std::exp(p.s / (8.0 * n));
    p.rescaled = factor * p.tail;
    if (p.rescaled > r.bound + 3.0 * factor * p.stderr_) r.holds = false;
    if (p.tail > 0.0)
      r.empirical_exponent =
          std::min(r.empirical_exponent, n * (std::log(r.bound) - std::log(p.tail)) / p.s);
    r.points.push_back(p);
  }
  return r;
}

}  // namespace cramer
