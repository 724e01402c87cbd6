#include <gtest/gtest.h>

#include <cmath>

#include "cramer/cramer.hpp"
#include "cramer/depth.hpp"
#include "cramer/rng.hpp"
#include "cramer/special.hpp"

using namespace cramer;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double a : v) x(i++) = a;
  return x;
}

}  // namespace

TEST(Depth, GaussianClosedFormAndSphereSearch) {
  RandomStream rng(21, 0);
  DepthOptions search;
  search.allow_closed_form = false;
  for (int n = 2; n <= 5; ++n) {
    const MeasureModel g = MeasureModel::isotropic_gaussian(n);
    for (int k = 0; k < 5; ++k) {
      Vector x(n);
      for (int i = 0; i < n; ++i) x(i) = 1.5 * rng.normal();
      const double exact = normal_sf(x.norm());
      const DepthResult closed = depth(g, x);
      EXPECT_EQ(closed.method, DepthMethod::ClosedForm);
      EXPECT_NEAR(closed.value, exact, 1e-6);
      const DepthResult opt = depth(g, x, search);
      EXPECT_EQ(opt.method, DepthMethod::SphereOptimization);
      EXPECT_NEAR(opt.value, exact, 2e-3);
      EXPECT_GE(opt.value, exact - 1e-12);
    }
  }
}

TEST(Depth, OneDimensionalIsSmallerTail) {
  const MeasureModel ex = MeasureModel::product_exponential(1);
  for (double x : {-0.9, -0.3, 0.0, 0.5, 3.0}) {
    const double cdf = 1 - std::exp(-(x + 1));
    EXPECT_NEAR(depth(ex, vec({x})).value, std::min(cdf, 1 - cdf), 1e-9) << x;
  }
}

TEST(Depth, SquareOnItsAxis) {
  const MeasureModel cube = MeasureModel::uniform_cube(2, 1.0);
  for (double a : {0.0, 0.1, 0.3, 0.45})
    EXPECT_NEAR(depth(cube, vec({a, 0.0})).value, 0.5 - a, 2e-3) << a;
  EXPECT_NEAR(depth(cube, vec({0.6, 0.0})).value, 0.0, 1e-12);
}

TEST(Depth, MonotoneAlongRays) {
  const MeasureModel b = MeasureModel::volume_one_ball(3);
  const Vector theta = vec({0.48, 0.6, 0.64});
  double prev = 1.0;
  for (double r = 0.0; r < 0.6; r += 0.05) {
    const double v = depth(b, r * theta).value;
    EXPECT_LE(v, prev + 1e-12);
    prev = v;
  }
}

TEST(Depth, CramerSandwich) {
  RandomStream rng(4, 4);
  for (const auto& z : isotropic_zoo(2)) {
    const Matrix pts = z.model.sample(8, 40);
    for (Eigen::Index i = 0; i < pts.cols(); ++i) {
      for (double eps : {0.1, 0.5}) {
        const DepthBoundsReport r = depth_cramer_bounds_check(z.model, pts.col(i), eps);
        EXPECT_TRUE(r.upper_holds) << z.label;
        EXPECT_TRUE(r.lower_holds) << z.label;
      }
    }
  }
}

TEST(Depth, ValuesMatchPointwise) {
  const MeasureModel ex = MeasureModel::product_exponential(2);
  const Matrix pts = ex.sample(3, 6);
  const auto v = depth_values(ex, pts, {}, Parallel(2));
  for (Eigen::Index i = 0; i < pts.cols(); ++i) EXPECT_EQ(v[i], depth(ex, pts.col(i)).value);
}

TEST(NegativeMoment, GaussianLine) {
  // J(p) = 2 int_0^{1/2} q^{-p} dq = 2^p / (1 - p) for p < 1
  const MeasureModel g = MeasureModel::isotropic_gaussian(1);
  const NegativeMomentReport half = negative_moment(g, 0.5, 13, 200000);
  EXPECT_FALSE(half.tail.divergent);
  EXPECT_NEAR(half.estimate, std::pow(2.0, 0.5) / 0.5, 5 * half.stderr_);
  const NegativeMomentReport heavy = negative_moment(g, 1.5, 13, 200000);
  EXPECT_TRUE(heavy.tail.divergent);
}

TEST(NegativeMoment, MeanDepthOfGaussianLine) {
  const MeanEstimate m = depth_mean(MeasureModel::isotropic_gaussian(1), 5, 100000);
  EXPECT_NEAR(m.estimate, 0.25, 4 * m.stderr_);
}

TEST(HeavyTail, HillEstimator) {
  // Pareto(alpha) has tail index alpha
  RandomStream rng(6, 0);
  for (double alpha : {0.7, 3.0}) {
    std::vector<double> v(100000);
    for (double& x : v) x = std::pow(rng.uniform(), -1 / alpha);
    const HeavyTailDiagnostic d = heavy_tail_diagnostic(v);
    EXPECT_NEAR(d.tail_index, alpha, 0.15 * alpha);
    EXPECT_EQ(d.divergent, alpha <= 1.05);
  }
}
