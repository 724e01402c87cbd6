#pragma once

namespace cramer {

double normal_cdf(double x);
/// Upper tail 1 - Phi(x), accurate far into the tail.
double normal_sf(double x);
/// ln(1 - Phi(x)); uses the asymptotic series once the tail underflows.
double log_normal_sf(double x);
double normal_pdf(double x);
double normal_quantile(double p);

/// Volume of the Euclidean unit ball in R^n.
double unit_ball_volume(int n);
double log_unit_ball_volume(int n);

/// ln(1 - e^{-a}) for a > 0 without cancellation.
double log1mexp(double a);
/// ln(e^a + e^b).
double log_add(double a, double b);

}  // namespace cramer
