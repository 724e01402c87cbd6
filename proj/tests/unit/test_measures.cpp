#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cramer/errors.hpp"
#include "cramer/measures.hpp"
#include "cramer/model_io.hpp"

using namespace cramer;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double a : v) x(i++) = a;
  return x;
}

double lambda_value(const MeasureModel& m, const Vector& xi) {
  return m.log_laplace(xi, LaplaceOrder::Value).value;
}

}  // namespace

TEST(LogLaplace, GaussianIsHalfSquaredNorm) {
  const MeasureModel g = MeasureModel::isotropic_gaussian(3);
  const Vector xi = vec({0.3, -1.2, 2.0});
  const LogLaplaceEval e = g.log_laplace(xi, LaplaceOrder::Hessian);
  EXPECT_NEAR(e.value, 0.5 * xi.squaredNorm(), 1e-14);
  EXPECT_NEAR((e.gradient - xi).norm(), 0.0, 1e-14);
  EXPECT_NEAR((e.hessian - Matrix::Identity(3, 3)).norm(), 0.0, 1e-14);
}

TEST(LogLaplace, CenteredExponential) {
  const MeasureModel m = MeasureModel::product_exponential(1);
  for (double xi : {-5.0, -0.5, 0.2, 0.9, 0.999}) {
    const LogLaplaceEval e = m.log_laplace(vec({xi}), LaplaceOrder::Gradient);
    EXPECT_NEAR(e.value, -xi - std::log1p(-xi), 1e-12);
    EXPECT_NEAR(e.gradient(0), -1 + 1 / (1 - xi), 1e-9);
  }
  EXPECT_FALSE(m.log_laplace(vec({1.0}), LaplaceOrder::Value).in_domain);
}

TEST(LogLaplace, UniformCube) {
  const MeasureModel m = MeasureModel::uniform_cube(2, 1.0);
  for (double xi : {1e-4, 0.7, 5.0, 80.0}) {
    const double one = std::log(std::sinh(xi / 2) / (xi / 2));
    EXPECT_NEAR(lambda_value(m, vec({xi, -xi})), 2 * one, 1e-10 * std::max(1.0, one));
  }
}

TEST(LogLaplace, ThreeBallAgainstMarginalIntegral) {
  // X_1 has density (3/4)(1 - s^2) on [-1, 1]
  const MeasureModel m = MeasureModel::uniform_ball(3, 1.0);
  for (double xi : {0.1, 1.0, 6.0, 30.0}) {
    const double closed = std::log(3 * (xi * std::cosh(xi) - std::sinh(xi)) / std::pow(xi, 3));
    EXPECT_NEAR(lambda_value(m, vec({0, xi, 0})), closed, 1e-9 * std::max(1.0, closed));
  }
}

TEST(LogLaplace, NonnegativeAndZeroAtOrigin) {
  for (const auto& z : isotropic_zoo(2)) {
    EXPECT_NEAR(lambda_value(z.model, Vector::Zero(2)), 0.0, 1e-12) << z.label;
    for (double a : {0.1, 0.4})
      EXPECT_GE(lambda_value(z.model, vec({a, -a / 2})), -1e-12) << z.label;
  }
}

TEST(Marginals, ClosedForms) {
  const MeasureModel cube = MeasureModel::uniform_cube(2, 1.0);
  const Vector diag = vec({1, 1}).normalized();
  const double y = 0.5 * std::sqrt(2.0);
  EXPECT_NEAR(cube.marginal(diag).sf(0.5), 0.5 * (1 - y) * (1 - y), 1e-12);
  EXPECT_NEAR(cube.marginal(diag).cdf(0.0), 0.5, 1e-12);

  const MeasureModel ex = MeasureModel::product_exponential(2);
  EXPECT_NEAR(ex.marginal(vec({1, 0})).sf(0.7), std::exp(-1.7), 1e-12);

  const MeasureModel ball = MeasureModel::uniform_ball(3, 1.0);
  for (double s : {-0.5, 0.0, 0.3, 0.9})
    EXPECT_NEAR(ball.marginal(vec({0, 0, 1})).sf(s), (1 - s) * (1 - s) * (2 + s) / 4, 1e-10);

  const MeasureModel g = MeasureModel::isotropic_gaussian(4);
  EXPECT_NEAR(g.marginal(vec({0.5, 0.5, 0.5, 0.5})).sf(1.0), 0.5 * std::erfc(1 / std::sqrt(2.0)),
              1e-14);
}

TEST(Marginals, OneSidedExponentialSumNearItsEnd) {
  // -(0.8 E1 + 0.6 E2) + 1.4 exceeds 1.4 - y with probability ~ y^2 / (2 * 0.48)
  const MeasureModel ex = MeasureModel::product_exponential(2);
  const double y = 1e-6;
  EXPECT_NEAR(ex.marginal(vec({-0.8, -0.6})).sf(1.4 - y) / (y * y / 0.96), 1.0, 1e-3);
}

TEST(Density, GaussianAndBall) {
  const MeasureModel g = MeasureModel::isotropic_gaussian(3);
  const Vector x = vec({1, 2, -1});
  EXPECT_NEAR(g.log_density(x), -0.5 * x.squaredNorm() - 1.5 * std::log(2 * std::numbers::pi), 1e-13);
  const MeasureModel b = MeasureModel::volume_one_ball(3);
  EXPECT_NEAR(b.log_density(Vector::Zero(3)), 0.0, 1e-13);
  EXPECT_EQ(b.log_density(vec({1, 0, 0})), -INFINITY);
}

TEST(Sampling, ZooIsIsotropic) {
  for (int n : {2, 3}) {
    for (const auto& z : isotropic_zoo(n)) {
      const Matrix s = z.model.sample(11, 100000);
      const Vector mean = s.rowwise().mean();
      const Matrix centered = s.colwise() - mean;
      const Matrix cov = centered * centered.transpose() / (s.cols() - 1.0);
      EXPECT_LT(mean.cwiseAbs().maxCoeff(), 0.02) << z.label;
      EXPECT_LT((cov - Matrix::Identity(n, n)).cwiseAbs().maxCoeff(), 0.03) << z.label;
    }
  }
}

TEST(Sampling, InsideSupport) {
  const MeasureModel cube = MeasureModel::uniform_cube(4, 2.0);
  EXPECT_LE(cube.sample(2, 10000).cwiseAbs().maxCoeff(), 1.0);
  const MeasureModel ex = MeasureModel::product_exponential(3);
  EXPECT_GE(ex.sample(2, 10000).minCoeff(), -1.0);
}

TEST(Isotropy, ConstantsAndCovariance) {
  EXPECT_NEAR(isotropic_constant(MeasureModel::isotropic_gaussian(5)),
              1 / std::sqrt(2 * std::numbers::pi), 1e-12);
  EXPECT_NEAR(isotropic_constant(MeasureModel::uniform_cube(3, 1.0)), 1 / std::sqrt(12.0), 1e-12);
  // affine invariance
  Matrix a(2, 2);
  a << 2, 1, 0, 0.5;
  const MeasureModel pushed =
      MeasureModel::pushforward(MeasureModel::uniform_cube(2, 1.0), AffineMap::linear(a));
  EXPECT_NEAR(isotropic_constant(pushed), 1 / std::sqrt(12.0), 1e-10);
  const Isotropized iso = isotropize(pushed);
  const CovarianceResult c = covariance(iso.model);
  EXPECT_LT((c.value - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(ModelIo, ParsesDescriptors) {
  EXPECT_EQ(parse_model(R"({"kind":"IsotropicGaussian","dimension":3})").dimension(), 3);
  EXPECT_EQ(parse_model(R"({"kind":"UniformCube","dimension":2,"params":{"side":2}})").kind(),
            ModelKind::UniformCube);
  const MeasureModel p = parse_model(
      R"({"kind":"ProductFactors","dimension":2,"params":{"factors":[{"type":"uniform","width":2},{"type":"exponential","rate":3}]}})");
  EXPECT_EQ(p.kind(), ModelKind::ProductFactors);
  const MeasureModel iso = parse_model(
      R"({"kind":"AffinePushforward","dimension":2,"params":{"base":{"kind":"UniformCube","dimension":2},"isotropize":true}})");
  EXPECT_LT((covariance(iso).value - Matrix::Identity(2, 2)).norm(), 1e-10);
}

TEST(ModelIo, RejectsBadDescriptors) {
  EXPECT_THROW(parse_model("{"), InputError);
  EXPECT_THROW(parse_model(R"({"kind":"Nope","dimension":2})"), InputError);
  EXPECT_THROW(parse_model(R"({"kind":"UniformCube"})"), InputError);
  EXPECT_THROW(parse_model(R"({"kind":"UniformCube","dimension":0})"), InputError);
  EXPECT_THROW(parse_model(
                   R"({"kind":"ProductFactors","dimension":2,"params":{"factors":[{"type":"uniform"}]}})"),
               InputError);
}
