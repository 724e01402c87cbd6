#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cramer/measures.hpp"
#include "cramer/parallel.hpp"

namespace cramer {

enum class DepthMethod { ClosedForm, SphereOptimization };

std::string to_string(DepthMethod method);

struct DepthOptions {
  /// Coarse probe directions on the sphere.
  int coarse = 256;
  /// Best coarse probes refined locally.
  int refine_top = 8;
  /// Golden-section steps per geodesic arc.
  int golden_steps = 40;
  /// Refinement sweeps over the tangent basis; the arc length halves per sweep.
  int sweeps = 2;
  /// Use 1 - F(|x|) for rotation-invariant models.
  bool allow_closed_form = true;
  /// Extra starting direction (e.g. the previous minimizer along a ray).
  std::optional<Vector> warm_direction;
};

/// phi(x) = inf over unit u of mu({<z, u> >= <x, u>}).
struct DepthResult {
  /// For sphere optimization this is the smallest probed tail, an upper bound.
  double value = 1.0;
  Vector minimizing_direction;
  DepthMethod method = DepthMethod::ClosedForm;
  int evaluations = 0;
};

DepthResult depth(const MeasureModel& model, const Vector& x, const DepthOptions& options = {});

/// Depth at every column of `points`.
std::vector<double> depth_values(const MeasureModel& model, const Matrix& points,
                                 const DepthOptions& options = {}, const Parallel& par = {});

struct DepthBoundsReport {
  double depth = 1.0;
  double cramer = 0.0;
  /// exp(-Lambda*(x)); the depth never exceeds it.
  double upper = 1.0;
  /// ln(eps / (2 phi)^{1-eps}); Lambda*(x) is never below it.
  double lower = 0.0;
  bool upper_holds = true;
  bool lower_holds = true;
};

DepthBoundsReport depth_cramer_bounds_check(const MeasureModel& model, const Vector& x,
                                            double epsilon, double tol = 1e-9,
                                            const DepthOptions& options = {});

struct HeavyTailDiagnostic {
  /// Hill estimate of the tail exponent from the largest 1% of summands.
  double tail_index = 0.0;
  /// True when tail_index <= 1.05 (infinite mean suspected).
  bool divergent = false;
};

/// Hill tail-exponent fit on the largest max(10, 1%) values.
HeavyTailDiagnostic heavy_tail_diagnostic(std::vector<double> values);

struct NegativeMomentReport {
  double estimate = 0.0;
  double stderr_ = 0.0;
  HeavyTailDiagnostic tail;
  std::size_t samples = 0;
};

/// Monte-Carlo J(p) = E phi(X)^{-p}; the standard error is post-stratified by depth decile.
NegativeMomentReport negative_moment(const MeasureModel& model, double p, std::uint64_t seed,
                                     std::size_t samples, const Parallel& par = {},
                                     const DepthOptions& options = {});

struct MeanEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
};

/// Monte-Carlo E phi(X).
MeanEstimate depth_mean(const MeasureModel& model, std::uint64_t seed, std::size_t samples,
                        const Parallel& par = {}, const DepthOptions& options = {});

}  // namespace cramer
