#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cramer/measures.hpp"

namespace cramer::detail {

class MarginalImpl {
 public:
  virtual ~MarginalImpl() = default;
  virtual double cdf(double s) const = 0;
  virtual double sf(double s) const = 0;
  virtual double density(double s) const = 0;
  virtual double log_sf(double s) const;
  virtual bool is_estimate() const { return false; }
  virtual double cdf_halfwidth(double) const { return 0.0; }
};

class ModelImpl {
 public:
  virtual ~ModelImpl() = default;
  virtual int dimension() const = 0;
  virtual ModelKind kind() const = 0;
  virtual std::string name() const = 0;
  virtual double log_density(const Vector& x) const = 0;
  virtual double log_sup_density() const = 0;
  virtual Envelope envelope() const = 0;
  virtual bool is_even() const = 0;
  virtual bool is_rotation_invariant() const { return false; }
  virtual void sample_into(RandomStream& rng, Eigen::Ref<Vector> out) const = 0;
  virtual std::shared_ptr<const MarginalImpl> marginal(const Vector& unit) const = 0;
  virtual std::optional<Matrix> covariance() const = 0;
  virtual LogLaplaceEval log_laplace(const Vector& xi, LaplaceOrder order) const = 0;
};

// Marginal factories (marginal.cpp).
std::shared_ptr<const MarginalImpl> make_normal_marginal(double sigma, double mean = 0.0);
/// First coordinate of the uniform measure on the n-ball of the given radius.
std::shared_ptr<const MarginalImpl> make_ball_marginal(int n, double radius);
/// Sum of independent centered uniforms with the given interval widths.
std::shared_ptr<const MarginalImpl> make_uniform_sum_marginal(std::vector<double> widths);
/// Sum of w_i (E_i - 1) with E_i standard exponential; weights may be negative.
std::shared_ptr<const MarginalImpl> make_exponential_sum_marginal(std::vector<double> weights);
/// scale * Y + shift for a base marginal Y, scale > 0.
std::shared_ptr<const MarginalImpl> make_affine_marginal(
    std::shared_ptr<const MarginalImpl> base, double scale, double shift);
/// A + B for independent A and B; b_scale is a length scale of B (its spread).
std::shared_ptr<const MarginalImpl> make_convolution_marginal(
    std::shared_ptr<const MarginalImpl> a, std::shared_ptr<const MarginalImpl> b,
    double b_scale);
/// Empirical law of the given sample.
std::shared_ptr<const MarginalImpl> make_sample_marginal(std::vector<double> values);

}  // namespace cramer::detail
