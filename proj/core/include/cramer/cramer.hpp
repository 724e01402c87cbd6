#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "cramer/measures.hpp"

namespace cramer {

enum class LegendreStatus { Converged, DivergedToInfinity, BoundaryLimited };

/// "converged", "diverged_to_infinity", "boundary_limited".
std::string to_string(LegendreStatus status);

struct LegendreOptions {
  /// Bound on |grad Lambda(xi) - x| at convergence.
  double tol = 1e-8;
  /// Objective level that declares Lambda*(x) = +inf.
  double divergence_cap = 1e6;
  /// |xi| beyond which an unconverged ascent is declared divergent.
  double xi_cap = 1e12;
  int max_iterations = 500;
  std::optional<Vector> warm_start;
};

/// Lambda*(x) = sup_xi <x, xi> - Lambda(xi) with its maximizer.
struct LegendreResult {
  double value = 0.0;
  std::optional<Vector> maximizer;
  int iterations = 0;
  double gradient_residual = 0.0;
  LegendreStatus status = LegendreStatus::Converged;

  bool finite() const { return status != LegendreStatus::DivergedToInfinity; }
};

/// Damped Newton ascent of xi -> <x, xi> - Lambda(xi), backtracking (Armijo
/// 1e-4) inside the domain of Lambda. Throws InputError for non-finite x.
LegendreResult cramer_transform(const MeasureModel& model, const Vector& x,
                                const LegendreOptions& options = {});

/// Shorthand for the value, +inf when divergent.
double cramer_value(const MeasureModel& model, const Vector& x, double tol = 1e-8);

struct BiconjugateGrid {
  /// Rays besides the one through grad Lambda(xi).
  int rays = 8;
  int radial_points = 41;
  /// The radial grid runs to radius_factor * max(|grad Lambda(xi)|, 1).
  double radius_factor = 2.0;
  std::uint64_t seed = 7;
};

/// |sup_x (<x, xi> - Lambda*(x)) - Lambda(xi)| with the sup taken over radial
/// grids on rays (refined by golden section around the best grid point).
double biconjugate_residual(const MeasureModel& model, const Vector& xi,
                            const BiconjugateGrid& grid = {});

}  // namespace cramer
