#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cramer/depth.hpp"
#include "cramer/measures.hpp"
#include "cramer/parallel.hpp"

namespace cramer {

struct TailPoint {
  double s = 0.0;
  /// 1 - mu(T_s)
  double tail = 0.0;
  double stderr_ = 0.0;
  double rescaled = 0.0;
};

struct TailCurve {
  /// True for uniform measures on convex bodies (rescaled by e^{2s/(n+1)}),
  /// otherwise the rescaling is e^{s/(8n)}.
  bool uniform_body = false;
  std::vector<TailPoint> points;
};

/// Uniform on a ball or cube, possibly through an affine map.
bool is_uniform_body(const MeasureModel& model);

/// Monte-Carlo 1 - mu(T_s) on an increasing positive grid; one depth
/// evaluation per sample serves every s.
TailCurve tail_curve(const MeasureModel& model, const std::vector<double>& s_grid,
                     std::uint64_t seed, std::size_t samples, const Parallel& par = {},
                     const DepthOptions& options = {});

/// Area of the cap cut from the unit-area disk by a chord at distance d from
/// the centre; this is the depth of a point at distance d.
double disk_cap_area(double d);
/// Radius of T_s for the unit-area disk.
double disk_floating_radius(double s);
/// (3 pi / 2)^{2/3}, the limit of e^{2s/3} (1 - mu(T_s)) for the unit-area disk.
double disk_asa_target();

struct LimitFit {
  double limit = 0.0;
  double amplitude = 0.0;
  double rate = 0.0;
};

/// Weighted least-squares fit of y = L + a e^{-b s}: b on a log grid over
/// [rate_min, rate_max], L and a linear.
LimitFit fit_exponential_limit(const std::vector<double>& s, const std::vector<double>& y,
                               const std::vector<double>& stderr_, double rate_min = 0.01,
                               double rate_max = 10.0);

struct DiskAsaReport {
  std::vector<TailPoint> points;
  /// e^{4s/2} (1 - mu(T_s)): the rescaling with c = 4 > 2.
  std::vector<double> sharp_rescaled;
  LimitFit fit;
  double target = 0.0;
  double relative_error = 0.0;
  bool within_tolerance = false;
  bool sharpness_grows = false;
};

/// Tail of the unit-area disk floating bodies by importance sampling on the
/// annulus outside T_s, with depth from exact cap geometry; the fit uses the
/// top half of the grid.
DiskAsaReport disk_asa_limit_check(const std::vector<double>& s_grid, std::uint64_t seed,
                                   std::size_t samples, double tolerance = 0.1,
                                   const Parallel& par = {});

struct TMeasureReport {
  std::string model;
  int n = 0;
  std::vector<TailPoint> points;
  /// exp(n ln n / 8)
  double bound = 0.0;
  /// Largest c with e^{c s / n} (1 - mu(T_s)) <= bound on the grid.
  double empirical_exponent = 0.0;
  bool holds = true;
};

/// e^{s/(8n)} (1 - mu(T_s)) <= exp(n ln n / 8) on the grid, within 3 sigma.
TMeasureReport t_measure_bound_check(const MeasureModel& model, const std::vector<double>& s_grid,
                                     std::uint64_t seed, std::size_t samples,
                                     const Parallel& par = {}, const DepthOptions& options = {});

}  // namespace cramer
