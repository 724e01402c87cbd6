#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cramer/parallel.hpp"
#include "cramer/rng.hpp"

namespace cramer {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class ModelKind {
  IsotropicGaussian,
  UniformBall,
  UniformCube,
  ProductExponentialCentered,
  ProductFactors,
  AffinePushforward,
};

std::string to_string(ModelKind kind);

/// One-dimensional centered log-concave factor of a product model.
struct Factor {
  enum class Kind { Uniform, Exponential, Gaussian };
  Kind kind;
  /// Uniform: interval width. Exponential: rate. Gaussian: standard deviation.
  double parameter;

  static Factor uniform(double width) { return {Kind::Uniform, width}; }
  static Factor exponential(double rate) { return {Kind::Exponential, rate}; }
  static Factor gaussian(double sigma) { return {Kind::Gaussian, sigma}; }
};

/// x -> matrix * x + shift, with matrix invertible.
class AffineMap {
 public:
  AffineMap(Matrix matrix, Vector shift);
  static AffineMap identity(int n);
  static AffineMap linear(Matrix matrix);

  const Matrix& matrix() const { return matrix_; }
  const Vector& shift() const { return shift_; }
  int dimension() const { return static_cast<int>(shift_.size()); }
  double log_abs_det() const { return log_abs_det_; }
  /// Largest singular value of the matrix.
  double norm() const { return norm_; }

  Vector apply(const Vector& x) const { return matrix_ * x + shift_; }
  Vector invert(const Vector& y) const;
  /// T^{-1} applied to a vector without the shift.
  Vector inverse_linear(const Vector& y) const;
  AffineMap inverse() const;
  bool is_identity(double tol = 0.0) const;

 private:
  Matrix matrix_;
  Vector shift_;
  Eigen::PartialPivLU<Matrix> lu_;
  double log_abs_det_ = 0.0;
  double norm_ = 1.0;
};

/// f(x) <= A e^{-B|x|}, stored as (ln A, B).
struct Envelope {
  double log_a;
  double b;
};

enum class LaplaceOrder { Value, Gradient, Hessian };

/// Lambda(xi) = ln E e^{<xi, X>} with its tilted mean and covariance.
struct LogLaplaceEval {
  double value = 0.0;
  bool in_domain = true;
  Vector gradient;
  Matrix hessian;
};

namespace detail {
class ModelImpl;
class MarginalImpl;
}  // namespace detail

/// Law of s -> <X, direction> for X ~ mu.
class DirectionalMarginal {
 public:
  DirectionalMarginal(Vector direction, std::shared_ptr<const detail::MarginalImpl> impl);

  const Vector& direction() const { return direction_; }
  double cdf(double s) const;
  /// mu({<z, direction> >= s}), computed directly (no 1 - cdf cancellation).
  double sf(double s) const;
  double density(double s) const;
  double log_sf(double s) const;
  /// True when the values come from a Monte-Carlo sample.
  bool is_estimate() const;
  /// Wilson interval half-width at 95% for Monte-Carlo marginals; 0 otherwise.
  double cdf_halfwidth(double s) const;

 private:
  Vector direction_;
  std::shared_ptr<const detail::MarginalImpl> impl_;
};

/// Centered log-concave probability measure on R^n. Immutable and cheap to
/// copy; instances can be shared across threads.
class MeasureModel {
 public:
  static MeasureModel isotropic_gaussian(int n);
  static MeasureModel uniform_ball(int n, double radius);
  /// Uniform measure on the centered Euclidean ball of volume 1.
  static MeasureModel volume_one_ball(int n);
  static MeasureModel uniform_cube(int n, double side);
  static MeasureModel product_exponential(int n);
  static MeasureModel product(std::vector<Factor> factors);
  static MeasureModel pushforward(const MeasureModel& base, const AffineMap& map);

  int dimension() const;
  ModelKind kind() const;
  /// Short human-readable identifier, e.g. "UniformBall(n=3,r=1)".
  std::string name() const;

  /// ln f(x); -inf outside the support. Throws InputError on dimension mismatch.
  double log_density(const Vector& x) const;
  double log_density_at_zero() const { return log_density_at_zero_; }
  /// ln sup f.
  double log_sup_density() const;
  Envelope envelope() const;
  /// Even measures satisfy mu(-A) = mu(A).
  bool is_even() const;
  /// True for models whose law is invariant under rotations about 0.
  bool is_rotation_invariant() const;

  void sample_into(RandomStream& rng, Eigen::Ref<Vector> out) const;
  /// `count` i.i.d. draws as matrix columns; chunk c uses stream (seed, c).
  Matrix sample(std::uint64_t seed, std::size_t count, const Parallel& par = {}) const;

  DirectionalMarginal marginal(const Vector& direction) const;
  std::optional<Matrix> closed_form_covariance() const;
  LogLaplaceEval log_laplace(const Vector& xi, LaplaceOrder order) const;

  /// Pushforward description (base, map) when kind() == AffinePushforward.
  const MeasureModel* pushforward_base() const;
  const AffineMap* pushforward_map() const;

  const detail::ModelImpl& impl() const { return *impl_; }

 private:
  explicit MeasureModel(std::shared_ptr<const detail::ModelImpl> impl);

  std::shared_ptr<const detail::ModelImpl> impl_;
  double log_density_at_zero_ = 0.0;
};

struct CovarianceResult {
  Matrix value;
  /// Entry-wise Monte-Carlo standard error; zero for closed forms.
  Matrix stderr_;
  bool closed_form = true;
};

/// Closed form where available, otherwise Monte-Carlo over `samples` draws.
CovarianceResult covariance(const MeasureModel& model, std::uint64_t seed = 1,
                            std::size_t samples = 200000, const Parallel& par = {});

/// Empirical covariance (with standard errors) of a fixed sample.
CovarianceResult covariance_monte_carlo(const MeasureModel& model, std::uint64_t seed,
                                        std::size_t samples, const Parallel& par = {});

struct Isotropized {
  AffineMap map;
  MeasureModel model;
};

/// Affine image with identity covariance: T = Cov^{-1/2}. Already isotropic
/// models are returned unchanged with the identity map.
Isotropized isotropize(const MeasureModel& model);

/// (sup f)^{1/n} det(Cov)^{1/(2n)}.
double isotropic_constant(const MeasureModel& model);

/// Unit directions where half-space masses have kinks: the +-axes of product
/// models, carried through affine maps (u -> T^{-T} u). Empty otherwise.
std::vector<Vector> axis_directions(const MeasureModel& model);

struct ZooEntry {
  std::string label;
  MeasureModel model;
};

/// Isotropic Gaussian, cube, ball and centered exponential product in dimension n,
/// labelled "gaussian", "cube", "ball", "exponential".
std::vector<ZooEntry> isotropic_zoo(int n);

}  // namespace cramer
