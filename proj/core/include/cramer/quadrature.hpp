#pragma once

#include <functional>
#include <vector>

namespace cramer {

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached rule with `points` nodes (Newton iteration on P_n).
const GaussLegendreRule& gauss_legendre(int points);

/// Composite Gauss-Legendre integral of f over [a, b] with `panels` panels.
double integrate_panels(const std::function<double(double)>& f, double a, double b,
                        int panels, int points = 20);

/// ln of the integral of exp(log_f) over [a, b], for log_f unimodal on [a, b]
/// (it may be -inf on a sub-interval, e.g. outside a compact support).
/// The mass is located first, the region where log_f is more than `drop`
/// below its maximum is discarded, and the rest is integrated by adaptive
/// Gauss-Kronrod in scaled form. Returns -inf when log_f is -inf on a grid
/// covering [a, b].
double log_integrate_unimodal(const std::function<double(double)>& log_f, double a,
                              double b, double drop = 60.0, double rel_tol = 1e-11);

/// ln of the integral of exp(log_f) over [0, inf) for log-concave log_f. The
/// upper limit doubles from `scale` until log_f has dropped well below its
/// largest sampled value.
double log_integrate_half_line(const std::function<double(double)>& log_f, double scale,
                               double drop = 60.0, double rel_tol = 1e-11);

/// Golden-section maximization of a unimodal function on [a, b].
double golden_section_argmax(const std::function<double(double)>& f, double a, double b,
                             int iterations);

}  // namespace cramer
