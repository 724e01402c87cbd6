#include <gtest/gtest.h>

#include <cmath>

#include "cramer/cramer.hpp"
#include "cramer/errors.hpp"
#include "cramer/rng.hpp"

using namespace cramer;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double a : v) x(i++) = a;
  return x;
}

// Lambda* of the uniform law on [-1/2, 1/2] by bisection on Lambda'(xi) = coth(xi/2)/2 - 1/xi
double cube_1d_oracle(double x) {
  if (x == 0.0) return 0.0;
  const double target = std::abs(x);
  double lo = 0.0, hi = 1.0;
  auto grad = [](double xi) { return xi < 1e-6 ? xi / 12 : 0.5 / std::tanh(xi / 2) - 1 / xi; };
  while (grad(hi) < target) hi *= 2;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (grad(mid) < target ? lo : hi) = mid;
  }
  const double xi = 0.5 * (lo + hi);
  // ln(sinh(xi/2)/(xi/2)) written to avoid overflow
  const double lam = xi / 2 + std::log1p(-std::exp(-xi)) - std::log(xi);
  return target * xi - lam;
}

}  // namespace

TEST(CramerTransform, GaussianIsHalfSquaredNorm) {
  RandomStream rng(5, 0);
  for (int n = 1; n <= 8; ++n) {
    const MeasureModel g = MeasureModel::isotropic_gaussian(n);
    for (int k = 0; k < 50; ++k) {
      Vector x(n);
      for (int i = 0; i < n; ++i) x(i) = 3 * rng.normal();
      const LegendreResult r = cramer_transform(g, x);
      EXPECT_EQ(r.status, LegendreStatus::Converged);
      EXPECT_NEAR(r.value, 0.5 * x.squaredNorm(), 1e-8);
      ASSERT_TRUE(r.maximizer);
      EXPECT_NEAR((*r.maximizer - x).norm(), 0.0, 1e-7);
    }
  }
}

TEST(CramerTransform, CenteredExponentialClosedForm) {
  const MeasureModel m = MeasureModel::product_exponential(1);
  for (double x = -0.99; x < 20; x += 0.37)
    EXPECT_NEAR(cramer_value(m, vec({x})), x - std::log1p(x), 1e-8) << x;
  EXPECT_EQ(cramer_transform(m, vec({-1.0})).status, LegendreStatus::DivergedToInfinity);
}

TEST(CramerTransform, UniformIntervalAgainstBisectionOracle) {
  const MeasureModel m = MeasureModel::uniform_cube(1, 1.0);
  for (double x : {0.01, 0.1, 0.25, -0.4, 0.49, 0.4999})
    EXPECT_NEAR(cramer_value(m, vec({x})), cube_1d_oracle(x), 1e-8 * std::max(1.0, cube_1d_oracle(x)));
}

TEST(CramerTransform, CubeBoundaryDiverges) {
  const MeasureModel m = MeasureModel::uniform_cube(1, 1.0);
  for (double x : {0.5, -0.5, 0.7}) {
    const LegendreResult r = cramer_transform(m, vec({x}));
    EXPECT_EQ(r.status, LegendreStatus::DivergedToInfinity) << x;
    EXPECT_FALSE(r.finite());
  }
  EXPECT_EQ(cramer_value(m, vec({0.5})), INFINITY);
}

TEST(CramerTransform, ProductsTensorize) {
  const MeasureModel cube = MeasureModel::uniform_cube(2, 1.0);
  EXPECT_NEAR(cramer_value(cube, vec({0.3, -0.45})), cube_1d_oracle(0.3) + cube_1d_oracle(-0.45), 1e-8);
  const MeasureModel ex = MeasureModel::product_exponential(3);
  const double x[] = {2.0, -0.5, 0.1};
  double sum = 0;
  for (double a : x) sum += a - std::log1p(a);
  EXPECT_NEAR(cramer_value(ex, vec({2.0, -0.5, 0.1})), sum, 1e-8);
}

TEST(CramerTransform, AffineEquivariance) {
  Matrix a(2, 2);
  a << 1.5, 0.4, -0.2, 0.8;
  const MeasureModel base = MeasureModel::product_exponential(2);
  const MeasureModel pushed = MeasureModel::pushforward(base, AffineMap::linear(a));
  for (const Vector& x : {vec({0.3, 0.2}), vec({-0.5, 1.7}), vec({2.0, -0.1})})
    EXPECT_NEAR(cramer_value(pushed, a * x), cramer_value(base, x), 1e-7);
}

TEST(CramerTransform, RejectsNonFinitePoints) {
  const MeasureModel g = MeasureModel::isotropic_gaussian(2);
  EXPECT_THROW(cramer_transform(g, vec({NAN, 0})), InputError);
  EXPECT_THROW(cramer_transform(g, vec({1, 2, 3})), InputError);
}

class CramerProperties : public ::testing::TestWithParam<int> {};

TEST_P(CramerProperties, ZeroAtOriginNonnegativeMonotoneConvex) {
  const int n = GetParam();
  RandomStream rng(17, static_cast<std::uint64_t>(n));
  for (const auto& z : isotropic_zoo(n)) {
    EXPECT_NEAR(cramer_value(z.model, Vector::Zero(n)), 0.0, 1e-10) << z.label;
    for (int k = 0; k < 10; ++k) {
      Vector theta(n);
      for (int i = 0; i < n; ++i) theta(i) = rng.normal();
      theta.normalize();
      const double r1 = 0.3 * rng.uniform(), r2 = r1 + 0.5 * rng.uniform();
      const double v1 = cramer_value(z.model, r1 * theta), v2 = cramer_value(z.model, r2 * theta);
      EXPECT_GE(v1, 0.0) << z.label;
      EXPECT_GE(v2, v1 - 1e-9) << z.label;
      // midpoint convexity on a random segment
      Vector a(n), b(n);
      for (int i = 0; i < n; ++i) {
        a(i) = 0.4 * rng.normal();
        b(i) = 0.4 * rng.normal();
      }
      const double fa = cramer_value(z.model, a), fb = cramer_value(z.model, b);
      if (std::isfinite(fa) && std::isfinite(fb))
        EXPECT_LE(cramer_value(z.model, 0.5 * (a + b)), 0.5 * (fa + fb) + 1e-8) << z.label;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Dimensions, CramerProperties, ::testing::Values(1, 2, 3));

TEST(Biconjugate, ResidualIsSmall) {
  const MeasureModel g = MeasureModel::isotropic_gaussian(2);
  EXPECT_LE(biconjugate_residual(g, vec({0.7, -1.1})), 1e-4);
  const MeasureModel e = MeasureModel::product_exponential(1);
  for (double xi : {-2.0, 0.3, 0.8}) EXPECT_LE(biconjugate_residual(e, vec({xi})), 1e-4) << xi;
}
