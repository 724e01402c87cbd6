#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cramer/bodies.hpp"
#include "cramer/directions.hpp"
#include "cramer/errors.hpp"
#include "cramer/special.hpp"

using namespace cramer;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double a : v) x(i++) = a;
  return x;
}

// Gaussian K_t: rho^t = t int_0^inf r^{t-1} e^{-r^2/2} dr = t 2^{t/2-1} Gamma(t/2)
double gaussian_k(double t) {
  return std::exp((std::log(t) + (t / 2 - 1) * std::log(2.0) + std::lgamma(t / 2)) / t);
}

// Gaussian Z_t^+: E <X,u>_+^t = 2^{t/2} Gamma((t+1)/2) / (2 sqrt(pi))
double gaussian_zplus(double t) {
  return std::exp((t / 2 * std::log(2.0) + std::lgamma((t + 1) / 2) -
                   std::log(2 * std::sqrt(std::numbers::pi))) / t);
}

}  // namespace

TEST(Radial, GaussianBandR) {
  for (int n : {1, 2, 3, 5}) {
    const MeasureModel g = MeasureModel::isotropic_gaussian(n);
    for (const Vector& d : sphere_directions(n, 16))
      for (double t : {0.5, 2.0, 9.0}) {
        EXPECT_NEAR(radial(g, {Family::B, t}, d), std::sqrt(2 * t), 1e-7);
        EXPECT_NEAR(radial(g, {Family::R, t}, d), std::sqrt(2 * t), 1e-7);
      }
  }
}

TEST(Radial, GaussianKZplusT) {
  const MeasureModel g = MeasureModel::isotropic_gaussian(2);
  const Vector d = vec({0.6, 0.8});
  for (double t : {1.0, 2.0, 7.5, 400.0})
    EXPECT_NEAR(radial(g, {Family::K, t}, d) / gaussian_k(t), 1.0, 1e-9) << t;
  EXPECT_NEAR(radial(g, {Family::K, 2.0}, d), std::sqrt(2.0), 1e-9);
  for (double t : {1.0, 2.0, 10.0, 32.0})
    EXPECT_NEAR(radial(g, {Family::Zplus, t}, d) / gaussian_zplus(t), 1.0, 1e-8) << t;
  for (double s : {0.8, 1.841, 6.0})
    EXPECT_NEAR(radial(g, {Family::T, s}, d), normal_quantile(1 - std::exp(-s)), 1e-7) << s;
  EXPECT_EQ(radial(g, {Family::T, 0.5}, d), 0.0);  // e^{-s} > 1/2: empty
}

TEST(Radial, CubeLevelSetsAreTheCube) {
  const MeasureModel cube = MeasureModel::uniform_cube(2, 1.0);
  for (const Vector& d : sphere_directions(2, 12)) {
    const double boundary = 0.5 / d.cwiseAbs().maxCoeff();
    EXPECT_NEAR(radial(cube, {Family::R, 3.0}, d), boundary, 1e-9);
    EXPECT_NEAR(radial(cube, {Family::K, 3.0}, d), boundary, 1e-9);
    EXPECT_LT(radial(cube, {Family::B, 3.0}, d), boundary);
  }
}

TEST(Radial, ScaleMultiplies) {
  const MeasureModel g = MeasureModel::isotropic_gaussian(2);
  EXPECT_NEAR(radial(g, {Family::B, 2.0, 1.5}, vec({1, 0})), 3.0, 1e-7);
}

TEST(Radial, Guards) {
  const MeasureModel g = MeasureModel::isotropic_gaussian(2);
  EXPECT_THROW(radial(g, {Family::K, 600.0}, vec({1, 0})), RangeError);
  EXPECT_THROW(radial(g, {Family::B, -1.0}, vec({1, 0})), InputError);
  EXPECT_THROW(radial(g, {Family::B, 1.0}, vec({1, 1})), InputError);
  EXPECT_THROW(parse_family("Q"), InputError);
  EXPECT_EQ(parse_family(to_string(Family::Zplus)), Family::Zplus);
}

TEST(Radial, RAtZeroCollapses) {
  const MeasureModel g = MeasureModel::isotropic_gaussian(2);
  EXPECT_LT(radial(g, {Family::R, 0.0}, vec({1, 0})), 1e-7);
}

TEST(Zplus, BodyRadialNeverExceedsSupport) {
  const MeasureModel ex = MeasureModel::product_exponential(2);
  const ZplusBody z(ex, 4.0);
  for (const Vector& d : sphere_directions(2, 24)) {
    const double r = z.radial(d);
    EXPECT_LE(r, zplus_support(ex, 4.0, d) * (1 + 1e-9));
    EXPECT_TRUE(z.contains(0.99 * r * d));
    EXPECT_FALSE(z.contains(1.01 * r * d));
  }
}

TEST(Zplus, InvariantModelRadialIsSupport) {
  const MeasureModel b = MeasureModel::volume_one_ball(3);
  const ZplusBody z(b, 3.0);
  const Vector d = vec({0, 0.6, 0.8});
  EXPECT_NEAR(z.radial(d), zplus_support(b, 3.0, d), 1e-10);
}

TEST(Zplus, CentroidSupportIsSymmetric) {
  const MeasureModel ex = MeasureModel::product_exponential(2);
  const Vector u = vec({0.6, -0.8});
  EXPECT_NEAR(centroid_support(ex, 2.0, u), centroid_support(ex, 2.0, -u), 1e-10);
  // two-sided moment dominates the one-sided one
  EXPECT_GE(centroid_support(ex, 2.0, u), zplus_support(ex, 2.0, u));
}

TEST(Measure, GaussianRBodyIsChiSquare) {
  const MeasureModel g = MeasureModel::isotropic_gaussian(2);
  for (double t : {0.5, 2.0}) {
    const MeasureEstimate m = body_measure(g, {Family::R, t}, 3, 40000);
    EXPECT_NEAR(m.estimate, 1 - std::exp(-t), 4 * m.stderr_ + 1e-12);
  }
}

TEST(Measure, MembershipMatchesRadial) {
  const MeasureModel ex = MeasureModel::product_exponential(2);
  const BodySpec spec{Family::B, 2.0};
  Matrix pts(2, 8);
  const auto dirs = sphere_directions(2, 4);
  for (int i = 0; i < 4; ++i) {
    const double r = radial(ex, spec, dirs[i]);
    pts.col(2 * i) = 0.98 * r * dirs[i];
    pts.col(2 * i + 1) = 1.02 * r * dirs[i];
  }
  const std::vector<char> in = body_membership(ex, spec, pts);
  for (int i = 0; i < 4; ++i) {
    EXPECT_TRUE(in[2 * i]);
    EXPECT_FALSE(in[2 * i + 1]);
  }
}

TEST(Dilation, HoldsOnBodies) {
  const MeasureModel g = MeasureModel::isotropic_gaussian(3);
  const DilationReport d = dilation_measure_check(g, {Family::B, 2.0}, 0.1, 9, 20000);
  EXPECT_TRUE(d.holds);
  EXPECT_NEAR(d.factor, std::exp(0.6), 1e-12);
  EXPECT_GE(d.dilated, d.base);
}

TEST(RayProfile, ExponentialProfile) {
  // g = e^{-r}, m = 2, alpha = 5: rho = 10 and the head fraction is P(Gamma(3) <= 10)
  const RayProfileReport r = ray_profile_lemma_check([](double x) { return -x; }, 2.0, 5.0);
  EXPECT_NEAR(r.rho, 10.0, 1e-8);
  EXPECT_NEAR(r.ratio, 1 - 61 * std::exp(-10.0), 1e-8);
  EXPECT_NEAR(r.bound, 1 - std::exp(-2.5), 1e-14);
  EXPECT_TRUE(r.holds);
}

TEST(RayProfile, CompactProfile) {
  const RayProfileReport r = ray_profile_lemma_check(
      [](double x) { return x <= 1 ? std::log1p(-x) : -INFINITY; }, 1.0, 6.0);
  EXPECT_TRUE(r.holds);
  EXPECT_LE(r.rho, 1.0);
}

TEST(Inclusion, DetectsViolations) {
  const MeasureModel ex = MeasureModel::product_exponential(2);
  const auto dirs = sphere_directions(2, 32);
  EXPECT_TRUE(inclusion_check(ex, {Family::B, 1.0}, {Family::B, 2.0}, dirs).holds());
  const InclusionReport bad = inclusion_check(ex, {Family::B, 2.0}, {Family::B, 1.0}, dirs);
  EXPECT_FALSE(bad.holds());
  EXPECT_EQ(bad.violations, dirs.size());
  EXPECT_LT(bad.worst_margin, 0.0);
}

TEST(Inclusion, BallBodyChain) {
  for (const auto& z : isotropic_zoo(2)) {
    const auto dirs = sphere_directions(2, 32);
    EXPECT_TRUE(kt_chain_check(z.model, 2.0, 5.0, dirs).holds()) << z.label;
  }
}
