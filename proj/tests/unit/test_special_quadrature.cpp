#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cramer/quadrature.hpp"
#include "cramer/special.hpp"

using namespace cramer;

TEST(Special, NormalCdfMatchesErfc) {
  for (double x = -8; x <= 8; x += 0.25) {
    EXPECT_NEAR(normal_cdf(x), 0.5 * std::erfc(-x / std::sqrt(2.0)), 1e-15);
    EXPECT_NEAR(normal_sf(x) / (0.5 * std::erfc(x / std::sqrt(2.0))), 1.0, 1e-13);
  }
}

TEST(Special, LogNormalSfFarTail) {
  // Mills ratio: ln Q(x) = -x^2/2 - ln(x sqrt(2 pi)) + ln(1 - 1/x^2 + 3/x^4 - ...)
  for (double x : {40.0, 100.0, 1e3}) {
    const double approx = -0.5 * x * x - std::log(x * std::sqrt(2 * std::numbers::pi)) +
                          std::log1p(-1 / (x * x) + 3 / std::pow(x, 4));
    EXPECT_NEAR(log_normal_sf(x), approx, 1e-6 * std::abs(approx) / (x * x) + 1e-9);
  }
  EXPECT_NEAR(log_normal_sf(1.0), std::log(0.5 * std::erfc(1 / std::sqrt(2.0))), 1e-14);
}

TEST(Special, NormalQuantileInvertsCdf) {
  for (double p : {1e-12, 1e-5, 0.01, 0.3, 0.5, 0.77, 0.999})
    EXPECT_NEAR(normal_cdf(normal_quantile(p)) / p, 1.0, 1e-9);
}

TEST(Special, BallVolumes) {
  EXPECT_NEAR(unit_ball_volume(1), 2.0, 1e-15);
  EXPECT_NEAR(unit_ball_volume(2), std::numbers::pi, 1e-14);
  EXPECT_NEAR(unit_ball_volume(3), 4 * std::numbers::pi / 3, 1e-14);
  EXPECT_NEAR(log_unit_ball_volume(8), std::log(std::pow(std::numbers::pi, 4) / 24), 1e-13);
}

TEST(Special, LogHelpers) {
  for (double a : {1e-10, 1e-3, 0.5, 3.0, 50.0})
    EXPECT_NEAR(log1mexp(a), std::log(-std::expm1(-a)), 1e-12 * std::abs(std::log(-std::expm1(-a))) + 1e-20);
  EXPECT_NEAR(log_add(1000.0, 1000.0), 1000.0 + std::log(2.0), 1e-12);
  EXPECT_EQ(log_add(-INFINITY, 2.0), 2.0);
}

TEST(Quadrature, GaussLegendreIsExactForPolynomials) {
  const auto& rule = gauss_legendre(10);
  double s = 0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * std::pow(rule.nodes[i], 18);
  EXPECT_NEAR(s, 2.0 / 19, 1e-14);
  EXPECT_NEAR(integrate_panels([](double x) { return std::sin(x); }, 0, std::numbers::pi, 4), 2.0,
              1e-13);
}

TEST(Quadrature, LogIntegralOfGaussian) {
  auto lf = [](double x) { return -0.5 * x * x; };
  EXPECT_NEAR(log_integrate_unimodal(lf, -50, 50), 0.5 * std::log(2 * std::numbers::pi), 1e-10);
  // the mass far from the centre of the interval is located first
  auto shifted = [](double x) { return -0.5 * (x - 700) * (x - 700) * 1e4 + 3000; };
  EXPECT_NEAR(log_integrate_unimodal(shifted, -1e3, 1e3),
              3000 + 0.5 * std::log(2 * std::numbers::pi / 1e4), 1e-8);
}

TEST(Quadrature, LogIntegralWithCompactSupport) {
  auto lf = [](double x) { return x <= 1.0 ? 0.0 : -INFINITY; };
  EXPECT_NEAR(log_integrate_unimodal(lf, 0, 10), 0.0, 1e-9);
  EXPECT_EQ(log_integrate_unimodal([](double) { return -INFINITY; }, 0, 1), -INFINITY);
}

TEST(Quadrature, HalfLine) {
  // int_0^inf x^5 e^{-x} dx = 120
  auto lf = [](double x) { return 5 * std::log(x) - x; };
  EXPECT_NEAR(log_integrate_half_line(lf, 1.0), std::log(120.0), 1e-9);
}

TEST(Quadrature, GoldenSection) {
  EXPECT_NEAR(golden_section_argmax([](double x) { return -(x - 0.3) * (x - 0.3); }, -2, 2, 80), 0.3,
              1e-8);
}
