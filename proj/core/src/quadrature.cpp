#include "cramer/quadrature.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cramer/errors.hpp"

namespace cramer {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

GaussLegendreRule build_rule(int points) {
  GaussLegendreRule rule;
  rule.nodes.resize(points);
  rule.weights.resize(points);
  for (int i = 0; i < points; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (points + 0.5));
    double derivative = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= points; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      derivative = points * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / derivative;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * derivative * derivative);
  }
  return rule;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int points) {
  static std::mutex mutex;
  static std::map<int, GaussLegendreRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(points);
  if (it == cache.end()) it = cache.emplace(points, build_rule(points)).first;
  return it->second;
}

double integrate_panels(const std::function<double(double)>& f, double a, double b,
                        int panels, int points) {
  const GaussLegendreRule& rule = gauss_legendre(points);
  const double width = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * width;
    const double half = 0.5 * width;
    double sum = 0.0;
    for (int i = 0; i < points; ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    total += half * sum;
  }
  return total;
}

double golden_section_argmax(const std::function<double(double)>& f, double a, double b,
                             int iterations) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int i = 0; i < iterations; ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    }
  }
  return f1 > f2 ? x1 : x2;
}

double log_integrate_unimodal(const std::function<double(double)>& log_f, double a,
                              double b, double drop, double rel_tol) {
  if (!(b > a)) return kNegInf;
  // coarse scan to find the mode's neighbourhood
  constexpr int kScan = 64;
  int best = -1;
  double best_value = kNegInf;
  for (int i = 0; i <= kScan; ++i) {
    const double x = a + (b - a) * i / kScan;
    const double v = log_f(x);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  double mode;
  if (best < 0) {
    // mass might hide between grid points near a boundary; refine at the left end
    const double right = a + (b - a) / kScan;
    mode = golden_section_argmax(log_f, a, right, 80);
    best_value = log_f(mode);
    if (!std::isfinite(best_value)) return kNegInf;
  } else {
    const double left = a + (b - a) * std::max(best - 1, 0) / kScan;
    const double right = a + (b - a) * std::min(best + 1, kScan) / kScan;
    mode = golden_section_argmax(log_f, left, right, 90);
    if (log_f(mode) < best_value) mode = a + (b - a) * best / kScan;
    best_value = log_f(mode);
  }
  const double peak = best_value;
  const double floor = peak - drop;

  auto cut = [&](double inside, double outside) {
    if (log_f(outside) >= floor) return outside;
    for (int i = 0; i < 200 && std::abs(outside - inside) > 1e-15 * (1.0 + std::abs(inside)); ++i) {
      const double mid = 0.5 * (inside + outside);
      if (log_f(mid) >= floor)
        inside = mid;
      else
        outside = mid;
    }
    return outside;
  };
  const double lo = cut(mode, a);
  const double hi = cut(mode, b);

  auto scaled = [&](double x) {
    const double v = log_f(x);
    return v == kNegInf ? 0.0 : std::exp(v - peak);
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  // a split point hugging an end leaves a sliver on which the error estimate never settles
  const double sliver = 1e-9 * (hi - lo);
  double total = 0.0;
  if (mode - lo <= sliver || hi - mode <= sliver) {
    if (hi > lo) total = GK::integrate(scaled, lo, hi, 15, rel_tol);
  } else {
    total = GK::integrate(scaled, lo, mode, 15, rel_tol) + GK::integrate(scaled, mode, hi, 15, rel_tol);
  }
  if (!(total > 0.0) || !std::isfinite(total))
    throw NumericError("log_integrate_unimodal: quadrature produced no mass");
  return peak + std::log(total);
}

double log_integrate_half_line(const std::function<double(double)>& log_f, double scale,
                               double drop, double rel_tol) {
  double b = scale > 0.0 ? scale : 1.0;
  double best = log_f(0.0);
  double prev = best;
  for (int i = 0; i < 2000; ++i) {
    const double v = log_f(b);
    best = std::max(best, v);
    if (v == kNegInf || (v < best - drop - 10.0 && v < prev)) break;
    prev = v;
    b *= 2.0;
    if (!std::isfinite(b)) throw NumericError("log_integrate_half_line: no decay");
  }
  return log_integrate_unimodal(log_f, 0.0, b, drop, rel_tol);
}

}  // namespace cramer
