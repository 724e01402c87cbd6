#include "cramer/cramer.hpp"

#include <cmath>
#include <limits>

#include "cramer/directions.hpp"
#include "cramer/errors.hpp"
#include "cramer/quadrature.hpp"

namespace cramer {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kArmijo = 1e-4;

Vector initial_point(const MeasureModel& model, const Vector& x, const LegendreOptions& opt) {
  Vector xi;
  if (opt.warm_start && opt.warm_start->size() == x.size() && opt.warm_start->allFinite()) {
    xi = *opt.warm_start;
  } else if (auto cov = model.closed_form_covariance()) {
    xi = cov->ldlt().solve(x);
  } else {
    return Vector::Zero(x.size());
  }
  for (int k = 0; k < 60; ++k) {
    if (model.log_laplace(xi, LaplaceOrder::Value).in_domain) return xi;
    xi *= 0.5;
  }
  return Vector::Zero(x.size());
}

}  // namespace

std::string to_string(LegendreStatus status) {
  switch (status) {
    case LegendreStatus::Converged:
      return "converged";
    case LegendreStatus::DivergedToInfinity:
      return "diverged_to_infinity";
    case LegendreStatus::BoundaryLimited:
      return "boundary_limited";
  }
  return "unknown";
}

LegendreResult cramer_transform(const MeasureModel& model, const Vector& x,
                                const LegendreOptions& opt) {
  if (x.size() != model.dimension()) throw InputError("cramer: point length mismatch");
  if (!x.allFinite()) throw InputError("cramer: non-finite point");
  if (!(opt.tol > 0.0)) throw InputError("cramer: tol must be positive");

  Vector xi = initial_point(model, x, opt);
  LogLaplaceEval eval = model.log_laplace(xi, LaplaceOrder::Hessian);
  LegendreResult result;

  for (int it = 0;; ++it) {
    const Vector g = x - eval.gradient;
    const double objective = x.dot(xi) - eval.value;
    result.iterations = it;
    result.gradient_residual = g.norm();
    result.value = objective;
    result.maximizer = xi;

    Vector d = eval.hessian.ldlt().solve(g);
    double slope = g.dot(d);
    const bool newton = d.allFinite() && slope > 0.0;
    // A small gradient is not enough: along a ray where the objective grows
    // like ln|xi| the gradient decays while the Newton decrement stays O(1).
    const bool small_decrement = newton && slope <= 1e-12 * std::max(1.0, std::abs(objective));
    if (result.gradient_residual <= opt.tol && (small_decrement || slope == 0.0)) {
      result.status = LegendreStatus::Converged;
      result.value = std::max(0.0, objective);
      return result;
    }
    if (objective > opt.divergence_cap || xi.norm() > opt.xi_cap) {
      result.status = LegendreStatus::DivergedToInfinity;
      result.value = kInf;
      return result;
    }
    if (it >= opt.max_iterations) break;

    if (!newton) {
      d = g;
      slope = g.squaredNorm();
    }

    bool accepted = false;
    double step = 1.0;
    for (int k = 0; k < 80; ++k, step *= 0.5) {
      const Vector trial = xi + step * d;
      LogLaplaceEval te = model.log_laplace(trial, LaplaceOrder::Hessian);
      if (!te.in_domain || !std::isfinite(te.value)) continue;
      const double trial_obj = x.dot(trial) - te.value;
      const bool armijo = trial_obj >= objective + kArmijo * step * slope;
      // near the optimum the objective is flat to rounding; accept a smaller gradient
      const bool flat = trial_obj >= objective - 1e-14 * (1.0 + std::abs(objective)) &&
                        (x - te.gradient).norm() < result.gradient_residual;
      if (armijo || flat) {
        xi = trial;
        eval = std::move(te);
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  result.status = result.gradient_residual <= opt.tol ? LegendreStatus::Converged
                                                      : LegendreStatus::BoundaryLimited;
  result.value = std::max(0.0, result.value);
  return result;
}

double cramer_value(const MeasureModel& model, const Vector& x, double tol) {
  LegendreOptions opt;
  opt.tol = tol;
  const LegendreResult r = cramer_transform(model, x, opt);
  return r.finite() ? r.value : kInf;
}

double biconjugate_residual(const MeasureModel& model, const Vector& xi,
                            const BiconjugateGrid& grid) {
  const int n = model.dimension();
  const LogLaplaceEval at = model.log_laplace(xi, LaplaceOrder::Gradient);
  if (!at.in_domain) throw InputError("biconjugate_residual: xi outside the domain");

  std::vector<Vector> rays;
  const double gnorm = at.gradient.norm();
  if (gnorm > 0.0) rays.push_back(at.gradient / gnorm);
  for (auto& u : sphere_directions(n, static_cast<std::size_t>(grid.rays), grid.seed))
    rays.push_back(u);
  const double radius = grid.radius_factor * std::max(gnorm, 1.0);

  double best = 0.0;  // x = 0 gives <0, xi> - Lambda*(0) = 0
  for (const Vector& u : rays) {
    Vector warm = xi;
    auto objective = [&](double r) {
      LegendreOptions opt;
      opt.warm_start = warm;
      const LegendreResult lr = cramer_transform(model, r * u, opt);
      if (!lr.finite()) return -kInf;
      if (lr.maximizer) warm = *lr.maximizer;
      return r * u.dot(xi) - lr.value;
    };
    const double h = radius / (grid.radial_points - 1);
    double best_r = 0.0, best_v = 0.0;
    for (int k = 1; k < grid.radial_points; ++k) {
      const double v = objective(k * h);
      if (v > best_v) {
        best_v = v;
        best_r = k * h;
      }
    }
    const double lo = std::max(0.0, best_r - h), hi = best_r + h;
    const double r = golden_section_argmax(objective, lo, hi, 80);
    best = std::max({best, best_v, objective(r)});
  }
  return std::abs(best - at.value);
}

}  // namespace cramer
