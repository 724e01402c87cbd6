#include "cramer/bodies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cramer/cramer.hpp"
#include "cramer/directions.hpp"
#include "cramer/errors.hpp"
#include "cramer/quadrature.hpp"

namespace cramer {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxDoublings = 200;
constexpr int kMaxBisections = 200;

void require_unit(const Vector& theta, int n) {
  if (theta.size() != n) throw InputError("direction length mismatch");
  if (!(std::abs(theta.norm() - 1.0) <= 1e-10)) throw InputError("direction must be a unit vector");
}

// Lambda*(r theta) = t; Lambda* is convex along the ray, so Newton from above
// stays inside the bracket except for rounding.
double b_radial(const MeasureModel& model, double t, const Vector& theta) {
  if (t <= 0.0) return 0.0;
  std::optional<Vector> warm;
  auto eval = [&](double r, double& slope) {
    LegendreOptions opt;
    opt.tol = 1e-10;
    opt.warm_start = warm;
    const LegendreResult res = cramer_transform(model, r * theta, opt);
    if (!res.finite()) return kInf;
    warm = res.maximizer;
    slope = theta.dot(*res.maximizer);
    return res.value;
  };
  double lo = 0.0, hi = 1.0, slope = 0.0;
  double f = eval(hi, slope);
  for (int i = 0; f <= t; ++i) {
    if (i > kMaxDoublings) throw NumericError("B radial: unbounded level set");
    lo = hi;
    hi *= 2.0;
    f = eval(hi, slope);
  }
  double r = hi;
  for (int i = 0; i < kMaxBisections; ++i) {
    const double gap = f - t;
    if (std::abs(gap) <= 1e-13 * std::max(1.0, t)) return r;
    if (gap > 0) hi = r;
    else lo = r;
    if (hi - lo <= 1e-15 * hi) return 0.5 * (lo + hi);
    double next = 0.5 * (lo + hi);
    if (std::isfinite(f) && slope > 0.0) {
      const double newton = r - gap / slope;
      if (newton > lo && newton < hi) next = newton;
    }
    r = next;
    f = eval(r, slope);
  }
  throw NumericError("B radial: root search did not converge");
}

double r_radial(const MeasureModel& model, double t, const Vector& theta) {
  const double floor = model.log_density_at_zero() - t;
  auto inside = [&](double r) { return model.log_density(r * theta) >= floor; };
  double lo = 0.0, hi = 1.0;
  for (int i = 0; inside(hi); ++i) {
    if (i > kMaxDoublings) throw NumericError("R radial: unbounded level set");
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < kMaxBisections; ++i) {
    if (hi - lo <= std::max(1e-13 * hi, 1e-15)) return 0.5 * (lo + hi);
    const double mid = 0.5 * (lo + hi);
    if (inside(mid)) lo = mid;
    else hi = mid;
  }
  throw NumericError("R radial: bisection did not converge");
}

// rho^t = (t / f(0)) int_0^inf r^{t-1} f(r theta) dr, all in log space.
double k_radial(const MeasureModel& model, double t, const Vector& theta) {
  if (!(t > 0.0)) throw InputError("K family needs t > 0");
  if (t > kMaxBallBodyParameter)
    throw RangeError("K family parameter above " + std::to_string(kMaxBallBodyParameter));
  const Envelope env = model.envelope();
  const double scale = std::max(1.0, t) / env.b;
  double log_rho_t;
  if (t >= 1.0) {
    auto log_f = [&](double r) {
      if (r <= 0.0) return t == 1.0 ? model.log_density_at_zero() : -kInf;
      return (t - 1.0) * std::log(r) + model.log_density(r * theta);
    };
    log_rho_t = std::log(t) - model.log_density_at_zero() + log_integrate_half_line(log_f, scale);
  } else {
    // u = r^t
    auto log_f = [&](double u) { return model.log_density(std::pow(u, 1.0 / t) * theta); };
    log_rho_t = -model.log_density_at_zero() + log_integrate_half_line(log_f, std::pow(scale, t));
  }
  return std::exp(log_rho_t / t);
}

double t_radial(const MeasureModel& model, double s, const Vector& theta,
                const DepthOptions& base_options) {
  if (s <= 0.0) return 0.0;
  DepthOptions opt = base_options;
  auto h = [&](double r) {
    const DepthResult d = depth(model, r * theta, opt);
    if (d.method == DepthMethod::SphereOptimization && d.minimizing_direction.size() > 0)
      opt.warm_direction = d.minimizing_direction;
    return d.value > 0.0 ? std::log(d.value) + s : -kInf;
  };
  double h_lo = h(0.0);
  if (h_lo < 0.0) return 0.0;
  double lo = 0.0, hi = 1.0;
  double h_hi = h(hi);
  for (int i = 0; h_hi >= 0.0; ++i) {
    if (i > kMaxDoublings) throw NumericError("T radial: unbounded level set");
    lo = hi;
    h_lo = h_hi;
    hi *= 2.0;
    h_hi = h(hi);
  }
  // Illinois regula falsi; plain bisection while h(hi) = -inf
  const bool exact = model.is_rotation_invariant() && base_options.allow_closed_form;
  const double rel = exact ? 1e-13 : 1e-10;
  int side = 0;
  for (int i = 0; i < kMaxBisections; ++i) {
    if (hi - lo <= rel * hi) return 0.5 * (lo + hi);
    double r = 0.5 * (lo + hi);
    if (std::isfinite(h_hi)) {
      const double cand = (lo * h_hi - hi * h_lo) / (h_hi - h_lo);
      if (cand > lo && cand < hi) r = cand;
    }
    const double hr = h(r);
    if (hr >= 0.0) {
      lo = r;
      h_lo = hr;
      if (side == 1 && std::isfinite(h_hi)) h_hi *= 0.5;
      side = 1;
    } else {
      hi = r;
      h_hi = hr;
      if (side == -1) h_lo *= 0.5;
      side = -1;
    }
    if (std::abs(hr) <= 1e-14) return r;
  }
  throw NumericError("T radial: root search did not converge");
}

// ln int_0^inf t s^{t-1} q(s) ds with q a tail function given in log form.
double log_tail_moment(const std::function<double(double)>& log_q, double t, double scale) {
  if (t >= 1.0) {
    auto log_f = [&](double s) {
      if (s <= 0.0) return t == 1.0 ? log_q(0.0) : -kInf;
      return std::log(t) + (t - 1.0) * std::log(s) + log_q(s);
    };
    return log_integrate_half_line(log_f, scale * std::max(1.0, t));
  }
  auto log_f = [&](double u) { return log_q(std::pow(u, 1.0 / t)); };
  return log_integrate_half_line(log_f, std::pow(scale, t));
}

double marginal_scale(const MeasureModel& model, const Vector& unit) {
  if (auto cov = model.closed_form_covariance()) return std::sqrt(unit.dot(*cov * unit));
  return 1.0;
}

}  // namespace

std::string to_string(Family family) {
  switch (family) {
    case Family::B:
      return "B";
    case Family::R:
      return "R";
    case Family::K:
      return "K";
    case Family::Zplus:
      return "Zplus";
    case Family::T:
      return "T";
  }
  return "?";
}

Family parse_family(const std::string& name) {
  if (name == "B") return Family::B;
  if (name == "R") return Family::R;
  if (name == "K") return Family::K;
  if (name == "Zplus") return Family::Zplus;
  if (name == "T") return Family::T;
  throw InputError("unknown body family: " + name);
}

double zplus_support(const MeasureModel& model, double t, const Vector& u) {
  if (!(t > 0.0)) throw InputError("Zplus needs t > 0");
  const double norm = u.norm();
  if (norm == 0.0) return 0.0;
  const Vector unit = u / norm;
  const DirectionalMarginal m = model.marginal(unit);
  auto log_q = [&](double s) { return m.log_sf(s); };
  return norm * std::exp(log_tail_moment(log_q, t, marginal_scale(model, unit)) / t);
}

double centroid_support(const MeasureModel& model, double t, const Vector& u) {
  if (!(t > 0.0)) throw InputError("centroid body needs t > 0");
  const double norm = u.norm();
  if (norm == 0.0) return 0.0;
  const Vector unit = u / norm;
  const DirectionalMarginal m = model.marginal(unit);
  auto log_q = [&](double s) {
    const double q = m.sf(s) + m.cdf(-s);
    return q > 0.0 ? std::log(q) : -kInf;
  };
  return norm * std::exp(log_tail_moment(log_q, t, marginal_scale(model, unit)) / t);
}

double radial(const MeasureModel& model, const BodySpec& spec, const Vector& theta,
              const DepthOptions& depth_options) {
  require_unit(theta, model.dimension());
  if (!(spec.scale > 0.0)) throw InputError("body scale must be positive");
  if (!std::isfinite(spec.t) || spec.t < 0.0) throw InputError("body parameter must be finite and >= 0");
  // rotation-invariant bodies have the same radius in every direction
  const Vector& dir =
      model.is_rotation_invariant() ? Vector(Vector::Unit(model.dimension(), 0)) : theta;
  double r = 0.0;
  switch (spec.family) {
    case Family::B:
      r = b_radial(model, spec.t, dir);
      break;
    case Family::R:
      r = r_radial(model, spec.t, dir);
      break;
    case Family::K:
      r = k_radial(model, spec.t, dir);
      break;
    case Family::Zplus:
      r = zplus_support(model, spec.t, dir);
      break;
    case Family::T:
      r = t_radial(model, spec.t, dir, depth_options);
      break;
  }
  return spec.scale * r;
}

RadialProfile radial_profile(const MeasureModel& model, const BodySpec& spec,
                             const std::vector<Vector>& directions, const Parallel& par) {
  RadialProfile p{spec, directions, {}};
  p.values = par.map<double>(directions.size(),
                             [&](std::size_t i) { return radial(model, spec, directions[i]); });
  return p;
}

// ---------------------------------------------------------------------------
// ZplusBody

ZplusBody::ZplusBody(const MeasureModel& model, double t, int grid)
    : model_(model), t_(t), rotation_invariant_(model.is_rotation_invariant()) {
  const int n = model.dimension();
  if (rotation_invariant_) {
    invariant_h_ = zplus_support(model_, t_, Vector::Unit(n, 0));
    return;
  }
  if (n == 1) return;
  grid_ = sphere_directions(n, static_cast<std::size_t>(grid));
  // facet normals of product supports, which the minimizing u hugs near the facets
  for (const Vector& u : axis_directions(model_)) grid_.push_back(u);
  grid_h_.reserve(grid_.size());
  for (const Vector& u : grid_) grid_h_.push_back(zplus_support(model_, t_, u));
}

double ZplusBody::support(const Vector& u) const {
  if (rotation_invariant_) return invariant_h_ * u.norm();
  return zplus_support(model_, t_, u);
}

double ZplusBody::radial(const Vector& theta) const {
  if (rotation_invariant_) return invariant_h_;
  const int n = model_.dimension();
  if (n == 1) return support(theta);
  // rho(theta) = min over <theta, u> > 0 of h(u) / <theta, u>
  auto ratio = [&](const Vector& u) {
    const double c = theta.dot(u);
    return c > 1e-12 ? support(u) / c : kInf;
  };
  Vector best = theta;
  double best_v = ratio(theta);
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    const double c = theta.dot(grid_[i]);
    if (c <= 1e-12) continue;
    const double v = grid_h_[i] / c;
    if (v < best_v) {
      best_v = v;
      best = grid_[i];
    }
  }
  double width =
      n == 2 ? 2.0 * std::numbers::pi / std::max<std::size_t>(grid_.size(), 1)
             : std::min(1.0, 2.5 * std::pow(static_cast<double>(std::max<std::size_t>(grid_.size(), 1)),
                                             -1.0 / (n - 1)));
  for (int sweep = 0; sweep < 2; ++sweep, width *= 0.5) {
    for (const Vector& e : tangent_basis(best)) {
      auto neg = [&](double a) { return -ratio(geodesic(best, e, a)); };
      const double a = golden_section_argmax(neg, -width, width, 20);
      const Vector cand = geodesic(best, e, a);
      const double v = ratio(cand);
      if (v < best_v) {
        best_v = v;
        best = cand;
      }
    }
  }
  return best_v;
}

bool ZplusBody::contains(const Vector& x) const {
  const double norm = x.norm();
  if (norm == 0.0) return true;
  return norm <= radial(x / norm);
}

// ---------------------------------------------------------------------------
// Measures of bodies

std::vector<char> body_membership(const MeasureModel& model, const BodySpec& spec,
                                  const Matrix& points, const Parallel& par,
                                  const DepthOptions& depth_options) {
  const std::size_t count = static_cast<std::size_t>(points.cols());
  std::optional<ZplusBody> zplus;
  if (spec.family == Family::Zplus) zplus.emplace(model, spec.t);
  const double log_f0 = model.log_density_at_zero();
  return par.map<char>(count, [&](std::size_t i) -> char {
    const Vector x = points.col(static_cast<Eigen::Index>(i)) / spec.scale;
    switch (spec.family) {
      case Family::B:
        return cramer_value(model, x) <= spec.t;
      case Family::R:
        return model.log_density(x) >= log_f0 - spec.t;
      case Family::T:
        return depth(model, x, depth_options).value >= std::exp(-spec.t);
      case Family::K: {
        const double norm = x.norm();
        if (norm == 0.0) return 1;
        return norm <= radial(model, BodySpec{Family::K, spec.t, 1.0}, x / norm);
      }
      case Family::Zplus:
        return zplus->contains(x);
    }
    return 0;
  });
}

MeasureEstimate body_measure(const MeasureModel& model, const BodySpec& spec, std::uint64_t seed,
                             std::size_t samples, const Parallel& par,
                             const DepthOptions& depth_options) {
  if (samples < 1000) throw InputError("body_measure: at least 1000 samples required");
  const Matrix pts = model.sample(seed, samples, par);
  const std::vector<char> in = body_membership(model, spec, pts, par, depth_options);
  const double n = static_cast<double>(samples);
  const double p = static_cast<double>(std::count(in.begin(), in.end(), 1)) / n;
  return {p, std::sqrt(p * (1.0 - p) / n), samples};
}

DilationReport dilation_measure_check(const MeasureModel& model, const BodySpec& body,
                                      double delta, std::uint64_t seed, std::size_t samples,
                                      const Parallel& par) {
  if (delta < 0.0) throw InputError("dilation: delta must be >= 0");
  if (samples < 1000) throw InputError("dilation: at least 1000 samples required");
  const Matrix pts = model.sample(seed, samples, par);
  BodySpec dilated = body;
  dilated.scale *= 1.0 + delta;
  const std::vector<char> in_base = body_membership(model, body, pts, par);
  const std::vector<char> in_dil =
      delta == 0.0 ? in_base : body_membership(model, dilated, pts, par);
  DilationReport r;
  r.delta = delta;
  r.factor = std::exp(2.0 * model.dimension() * delta);
  const double n = static_cast<double>(samples);
  double sum = 0.0, sum2 = 0.0, base = 0.0, dil = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double d = in_dil[i] - r.factor * in_base[i];
    sum += d;
    sum2 += d * d;
    base += in_base[i];
    dil += in_dil[i];
  }
  r.base = base / n;
  r.dilated = dil / n;
  const double mean = sum / n;
  r.stderr_ = std::sqrt(std::max(0.0, sum2 / n - mean * mean) / (n - 1.0));
  r.holds = mean <= 3.0 * r.stderr_ + 1e-15;
  return r;
}

RayProfileReport ray_profile_lemma_check(const std::function<double(double)>& log_g, double m,
                                         double alpha) {
  if (!(m > 0.0)) throw InputError("ray profile: m must be positive");
  if (!(alpha >= 5.0)) throw InputError("ray profile: alpha must be at least 5");
  const double g0 = log_g(0.0);
  if (!std::isfinite(g0)) throw InputError("ray profile: g(0) must be positive");
  const double floor = g0 - alpha * m;
  double lo = 0.0, hi = 1.0;
  for (int i = 0; log_g(hi) >= floor; ++i) {
    if (i > kMaxDoublings) throw NumericError("ray profile: g does not decay");
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < kMaxBisections && hi - lo > 1e-14 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (log_g(mid) >= floor) lo = mid;
    else hi = mid;
  }
  RayProfileReport r;
  r.rho = lo;
  auto log_f = [&](double x) { return x <= 0.0 ? -kInf : m * std::log(x) + log_g(x); };
  const double head = log_integrate_unimodal(log_f, 0.0, r.rho);
  const double total = log_integrate_half_line(log_f, std::max(r.rho, 1.0));
  r.head = std::exp(head);
  r.total = std::exp(total);
  r.ratio = std::min(1.0, std::exp(head - total));
  r.bound = 1.0 - std::exp(-alpha * m / 4.0);
  r.holds = r.ratio >= r.bound - 1e-9;
  return r;
}

}  // namespace cramer

namespace cramer {

InclusionReport inclusion_check(const MeasureModel& model, const BodySpec& inner,
                                const BodySpec& outer, const std::vector<Vector>& directions,
                                double tol, const Parallel& par, const std::string& claim) {
  InclusionReport r;
  r.claim = claim.empty() ? to_string(inner.family) + " in " + to_string(outer.family) : claim;
  r.directions = directions.size();
  r.tol = tol;
  const bool inner_z = inner.family == Family::Zplus;
  const bool outer_z = outer.family == Family::Zplus;
  std::optional<ZplusBody> zi, zo;
  if (inner_z) zi.emplace(model, inner.t);
  if (outer_z) zo.emplace(model, outer.t);
  if (inner_z && outer_z) {
    r.semantics = "support functions compared per direction";
  } else if (outer_z) {
    r.semantics =
        "inner radial point tested against outer support on a 256-direction grid with local "
        "refinement (upper estimate of the outer radial)";
  } else if (inner_z) {
    r.semantics = "inner radial from support minimization on a direction grid vs outer radial";
  } else {
    r.semantics = "radial functions compared per direction";
  }
  r.margins = par.map<double>(directions.size(), [&](std::size_t i) {
    const Vector& theta = directions[i];
    double a, b;
    if (inner_z && outer_z) {
      a = inner.scale * zi->support(theta);
      b = outer.scale * zo->support(theta);
    } else {
      a = inner_z ? inner.scale * zi->radial(theta) : radial(model, inner, theta);
      b = outer_z ? outer.scale * zo->radial(theta) : radial(model, outer, theta);
    }
    if (b == 0.0) return a == 0.0 ? 0.0 : -1.0;
    return (b - a) / b;
  });
  r.worst_margin = r.margins.empty() ? 0.0 : *std::min_element(r.margins.begin(), r.margins.end());
  r.violations = static_cast<std::size_t>(std::count_if(
      r.margins.begin(), r.margins.end(), [&](double m) { return m < -tol; }));
  return r;
}

InclusionReport kt_chain_check(const MeasureModel& model, double t, double s,
                               const std::vector<Vector>& directions, double tol,
                               const Parallel& par) {
  if (!(t > 0.0 && t <= s)) throw InputError("K chain needs 0 < t <= s");
  const int n = model.dimension();
  const double lower = std::exp(std::lgamma(t + 1.0) / t - std::lgamma(s + 1.0) / s);
  const double upper = std::exp(n / t - n / s);
  InclusionReport r;
  r.claim = "K chain";
  r.directions = directions.size();
  r.tol = tol;
  r.semantics = "both scaled radial inequalities per direction; margin is the smaller one";
  r.margins = par.map<double>(directions.size(), [&](std::size_t i) {
    const double kt = radial(model, {Family::K, t, 1.0}, directions[i]);
    const double ks = radial(model, {Family::K, s, 1.0}, directions[i]);
    return std::min((kt - lower * ks) / kt, (upper * ks - kt) / (upper * ks));
  });
  r.worst_margin = r.margins.empty() ? 0.0 : *std::min_element(r.margins.begin(), r.margins.end());
  r.violations = static_cast<std::size_t>(std::count_if(
      r.margins.begin(), r.margins.end(), [&](double m) { return m < -tol; }));
  return r;
}

}  // namespace cramer
