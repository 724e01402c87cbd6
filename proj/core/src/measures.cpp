#include "cramer/measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "cramer/errors.hpp"
#include "cramer/quadrature.hpp"
#include "cramer/special.hpp"
#include "model_impl.hpp"

namespace cramer {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLog2Pi = 1.8378770664093454836;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

void require_dimension(int n) {
  if (n < 1) throw InputError("dimension must be positive");
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw InputError(std::string(what) + " must be positive");
}

LogLaplaceEval out_of_domain() {
  LogLaplaceEval e;
  e.value = kInf;
  e.in_domain = false;
  return e;
}

// ---------------------------------------------------------------------------
// One-dimensional factors of product models.

// L(y) = ln(sinh(y/2) / (y/2)), the log-Laplace of a width-1 centered uniform.
double uniform_log_laplace(double y) {
  const double a = std::abs(y);
  if (a < 1e-4) {
    const double y2 = y * y;
    return y2 / 24.0 - y2 * y2 / 2880.0 + y2 * y2 * y2 / 181440.0;
  }
  const double h = 0.5 * a;
  return h + std::log(-std::expm1(-2.0 * h) / (2.0 * h));
}

double uniform_log_laplace_d1(double y) {
  const double a = std::abs(y);
  if (a < 5e-2) {
    const double y2 = y * y;
    return y * (1.0 / 12.0 - y2 / 720.0 + y2 * y2 / 30240.0 - y2 * y2 * y2 / 1209600.0);
  }
  const double h = 0.5 * a;
  const double coth = h > 20.0 ? 1.0 : 1.0 / std::tanh(h);
  const double v = 0.5 * coth - 1.0 / a;
  return y < 0 ? -v : v;
}

double uniform_log_laplace_d2(double y) {
  const double a = std::abs(y);
  if (a < 5e-2) {
    const double y2 = y * y;
    return 1.0 / 12.0 - y2 / 240.0 + y2 * y2 / 6048.0 - y2 * y2 * y2 / 172800.0;
  }
  const double e = std::exp(-a);  // 1/(4 sinh^2(a/2)) = e^{-a} / (1 - e^{-a})^2
  const double d = -std::expm1(-a);
  return 1.0 / (a * a) - e / (d * d);
}

// -u - ln(1 - u) for u < 1
double exponential_log_laplace(double u) {
  if (std::abs(u) < 1e-4) {
    const double u2 = u * u;
    return u2 * (0.5 + u / 3.0 + u2 / 4.0 + u2 * u / 5.0);
  }
  return -u - std::log1p(-u);
}

struct FactorEval {
  double value;
  double d1;
  double d2;
  bool in_domain;
};

FactorEval factor_log_laplace(const Factor& f, double xi, LaplaceOrder order) {
  FactorEval r{0.0, 0.0, 0.0, true};
  switch (f.kind) {
    case Factor::Kind::Uniform: {
      const double y = f.parameter * xi;
      r.value = uniform_log_laplace(y);
      if (order != LaplaceOrder::Value) r.d1 = f.parameter * uniform_log_laplace_d1(y);
      if (order == LaplaceOrder::Hessian)
        r.d2 = f.parameter * f.parameter * uniform_log_laplace_d2(y);
      break;
    }
    case Factor::Kind::Exponential: {
      const double u = xi / f.parameter;
      if (!(u < 1.0)) {
        r.in_domain = false;
        r.value = kInf;
        break;
      }
      r.value = exponential_log_laplace(u);
      const double inv = 1.0 / (1.0 - u);
      r.d1 = u * inv / f.parameter;
      r.d2 = inv * inv / (f.parameter * f.parameter);
      break;
    }
    case Factor::Kind::Gaussian: {
      const double s2 = f.parameter * f.parameter;
      r.value = 0.5 * s2 * xi * xi;
      r.d1 = s2 * xi;
      r.d2 = s2;
      break;
    }
  }
  return r;
}

double factor_log_density(const Factor& f, double x) {
  switch (f.kind) {
    case Factor::Kind::Uniform:
      return std::abs(x) <= 0.5 * f.parameter ? -std::log(f.parameter) : -kInf;
    case Factor::Kind::Exponential: {
      const double z = x + 1.0 / f.parameter;
      return z >= 0.0 ? std::log(f.parameter) - f.parameter * z : -kInf;
    }
    case Factor::Kind::Gaussian: {
      const double z = x / f.parameter;
      return -0.5 * z * z - std::log(f.parameter) - 0.5 * kLog2Pi;
    }
  }
  return -kInf;
}

double factor_log_sup(const Factor& f) {
  switch (f.kind) {
    case Factor::Kind::Uniform:
      return -std::log(f.parameter);
    case Factor::Kind::Exponential:
      return std::log(f.parameter);
    case Factor::Kind::Gaussian:
      return -std::log(f.parameter) - 0.5 * kLog2Pi;
  }
  return 0.0;
}

// f(x) <= A e^{-B|x|}
Envelope factor_envelope(const Factor& f) {
  switch (f.kind) {
    case Factor::Kind::Uniform:
      return {1.0 - std::log(f.parameter), 2.0 / f.parameter};
    case Factor::Kind::Exponential:
      return {1.0 + std::log(f.parameter), f.parameter};
    case Factor::Kind::Gaussian:
      return {0.5 - std::log(f.parameter) - 0.5 * kLog2Pi, 1.0 / f.parameter};
  }
  return {0.0, 0.0};
}

double factor_variance(const Factor& f) {
  switch (f.kind) {
    case Factor::Kind::Uniform:
      return f.parameter * f.parameter / 12.0;
    case Factor::Kind::Exponential:
      return 1.0 / (f.parameter * f.parameter);
    case Factor::Kind::Gaussian:
      return f.parameter * f.parameter;
  }
  return 0.0;
}

double factor_sample(const Factor& f, RandomStream& rng) {
  switch (f.kind) {
    case Factor::Kind::Uniform:
      return f.parameter * (rng.uniform() - 0.5);
    case Factor::Kind::Exponential:
      return (rng.exponential() - 1.0) / f.parameter;
    case Factor::Kind::Gaussian:
      return f.parameter * rng.normal();
  }
  return 0.0;
}

// ---------------------------------------------------------------------------

class GaussianImpl final : public detail::ModelImpl {
 public:
  explicit GaussianImpl(int n) : n_(n) {}
  int dimension() const override { return n_; }
  ModelKind kind() const override { return ModelKind::IsotropicGaussian; }
  std::string name() const override { return "IsotropicGaussian(n=" + std::to_string(n_) + ")"; }
  double log_density(const Vector& x) const override {
    return -0.5 * n_ * kLog2Pi - 0.5 * x.squaredNorm();
  }
  double log_sup_density() const override { return -0.5 * n_ * kLog2Pi; }
  // -|x|^2/2 <= 1/2 - |x|
  Envelope envelope() const override { return {log_sup_density() + 0.5, 1.0}; }
  bool is_even() const override { return true; }
  bool is_rotation_invariant() const override { return true; }
  void sample_into(RandomStream& rng, Eigen::Ref<Vector> out) const override {
    for (int i = 0; i < n_; ++i) out[i] = rng.normal();
  }
  std::shared_ptr<const detail::MarginalImpl> marginal(const Vector&) const override {
    return detail::make_normal_marginal(1.0);
  }
  std::optional<Matrix> covariance() const override { return Matrix::Identity(n_, n_); }
  LogLaplaceEval log_laplace(const Vector& xi, LaplaceOrder order) const override {
    LogLaplaceEval e;
    e.value = 0.5 * xi.squaredNorm();
    if (order != LaplaceOrder::Value) e.gradient = xi;
    if (order == LaplaceOrder::Hessian) e.hessian = Matrix::Identity(n_, n_);
    return e;
  }

 private:
  int n_;
};

// Uniform measure on the centered ball of radius r. The log-Laplace transform
// depends on |xi| only: psi(s) = ln E e^{s X_1}, evaluated with X_1 = r cos(phi)
// and weight sin^n(phi) on [0, pi].
class BallImpl final : public detail::ModelImpl {
 public:
  BallImpl(int n, double radius) : n_(n), r_(radius) {
    log_volume_ = log_unit_ball_volume(n) + n * std::log(radius);
    variance_ = r_ * r_ / (n + 2.0);
    kappa4_ = -6.0 * std::pow(r_, 4) / ((n + 2.0) * (n + 2.0) * (n + 4.0));
    log_w_ = std::log(weight_integral(std::numbers::pi, 0.0).mass);
  }

  int dimension() const override { return n_; }
  ModelKind kind() const override { return ModelKind::UniformBall; }
  std::string name() const override {
    return "UniformBall(n=" + std::to_string(n_) + ",r=" + fmt(r_) + ")";
  }
  double log_density(const Vector& x) const override {
    return x.norm() <= r_ ? -log_volume_ : -kInf;
  }
  double log_sup_density() const override { return -log_volume_; }
  Envelope envelope() const override { return {1.0 - log_volume_, 1.0 / r_}; }
  bool is_even() const override { return true; }
  bool is_rotation_invariant() const override { return true; }
  void sample_into(RandomStream& rng, Eigen::Ref<Vector> out) const override {
    double norm2 = 0.0;
    do {
      for (int i = 0; i < n_; ++i) out[i] = rng.normal();
      norm2 = out.squaredNorm();
    } while (norm2 == 0.0);
    const double radius = r_ * std::pow(rng.uniform(), 1.0 / n_);
    out *= radius / std::sqrt(norm2);
  }
  std::shared_ptr<const detail::MarginalImpl> marginal(const Vector&) const override {
    return detail::make_ball_marginal(n_, r_);
  }
  std::optional<Matrix> covariance() const override {
    return Matrix::Identity(n_, n_) * variance_;
  }

  LogLaplaceEval log_laplace(const Vector& xi, LaplaceOrder order) const override {
    const double s = xi.norm();
    double psi, d1, d2, d1_over_s;
    if (s * r_ < 1e-3) {
      const double s2 = s * s;
      psi = 0.5 * variance_ * s2 + kappa4_ * s2 * s2 / 24.0;
      d1_over_s = variance_ + kappa4_ * s2 / 6.0;
      d1 = s * d1_over_s;
      d2 = variance_ + 0.5 * kappa4_ * s2;
    } else {
      const double sr = s * r_;
      const double phi_max =
          sr > 30.0 ? 2.0 * std::asin(std::min(1.0, std::sqrt(30.0 / sr))) : std::numbers::pi;
      const Tilted t = weight_integral(phi_max, sr);
      psi = sr + std::log(t.mass) - log_w_;
      // v = r(1 - cos phi), X_1 = r - v under the tilted law
      d1 = r_ - t.mean_v;
      d2 = t.var_v;
      d1_over_s = d1 / s;
    }
    LogLaplaceEval e;
    e.value = psi;
    if (order == LaplaceOrder::Value) return e;
    const int n = n_;
    if (s == 0.0) {
      e.gradient = Vector::Zero(n);
      if (order == LaplaceOrder::Hessian) e.hessian = Matrix::Identity(n, n) * variance_;
      return e;
    }
    const Vector u = xi / s;
    e.gradient = d1 * u;
    if (order == LaplaceOrder::Hessian) {
      e.hessian = d1_over_s * Matrix::Identity(n, n) + (d2 - d1_over_s) * (u * u.transpose());
    }
    return e;
  }

 private:
  struct Tilted {
    double mass;
    double mean_v;
    double var_v;
  };

  // Integrals of sin^n(phi) e^{-sr(1 - cos phi)} against 1, v, v^2 on [0, phi_max].
  Tilted weight_integral(double phi_max, double sr) const {
    const auto& rule = gauss_legendre(32);
    constexpr int kPanels = 8;
    const double h = phi_max / kPanels;
    double m0 = 0.0, m1 = 0.0, m2 = 0.0;
    for (int p = 0; p < kPanels; ++p) {
      const double mid = (p + 0.5) * h;
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const double phi = mid + 0.5 * h * rule.nodes[k];
        const double half = std::sin(0.5 * phi);
        const double one_minus_cos = 2.0 * half * half;
        const double w = rule.weights[k] * 0.5 * h *
                         std::exp(n_ * std::log(std::sin(phi)) - sr * one_minus_cos);
        const double v = r_ * one_minus_cos;
        m0 += w;
        m1 += w * v;
        m2 += w * v * v;
      }
    }
    const double mean = m1 / m0;
    return {m0, mean, std::max(0.0, m2 / m0 - mean * mean)};
  }

  int n_;
  double r_;
  double log_volume_;
  double variance_;
  double kappa4_;
  double log_w_;
};

class ProductImpl final : public detail::ModelImpl {
 public:
  ProductImpl(std::vector<Factor> factors, ModelKind kind)
      : factors_(std::move(factors)), kind_(kind) {
    for (const auto& f : factors_) {
      if (f.kind == Factor::Kind::Exponential) even_ = false;
    }
  }

  int dimension() const override { return static_cast<int>(factors_.size()); }
  ModelKind kind() const override { return kind_; }
  std::string name() const override {
    const std::string n = std::to_string(factors_.size());
    if (kind_ == ModelKind::UniformCube)
      return "UniformCube(n=" + n + ",a=" + fmt(factors_[0].parameter) + ")";
    if (kind_ == ModelKind::ProductExponentialCentered)
      return "ProductExponentialCentered(n=" + n + ")";
    std::string s = "ProductFactors(";
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      const auto& f = factors_[i];
      if (i) s += ",";
      s += f.kind == Factor::Kind::Uniform       ? "U"
           : f.kind == Factor::Kind::Exponential ? "E"
                                                 : "G";
      s += fmt(f.parameter);
    }
    return s + ")";
  }
  double log_density(const Vector& x) const override {
    double v = 0.0;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      v += factor_log_density(factors_[i], x[static_cast<Eigen::Index>(i)]);
      if (v == -kInf) break;
    }
    return v;
  }
  double log_sup_density() const override {
    double v = 0.0;
    for (const auto& f : factors_) v += factor_log_sup(f);
    return v;
  }
  // prod A_i e^{-B_i |x_i|} <= (prod A_i) e^{-min B_i |x|} since sum |x_i| >= |x|
  Envelope envelope() const override {
    Envelope e{0.0, kInf};
    for (const auto& f : factors_) {
      const Envelope fe = factor_envelope(f);
      e.log_a += fe.log_a;
      e.b = std::min(e.b, fe.b);
    }
    return e;
  }
  bool is_even() const override { return even_; }
  void sample_into(RandomStream& rng, Eigen::Ref<Vector> out) const override {
    for (std::size_t i = 0; i < factors_.size(); ++i)
      out[static_cast<Eigen::Index>(i)] = factor_sample(factors_[i], rng);
  }

  std::shared_ptr<const detail::MarginalImpl> marginal(const Vector& unit) const override {
    std::vector<double> widths, weights;
    double gauss_var = 0.0;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      const double c = unit[static_cast<Eigen::Index>(i)];
      if (c == 0.0) continue;
      const auto& f = factors_[i];
      switch (f.kind) {
        case Factor::Kind::Uniform:
          widths.push_back(f.parameter * std::abs(c));
          break;
        case Factor::Kind::Exponential:
          weights.push_back(c / f.parameter);
          break;
        case Factor::Kind::Gaussian:
          gauss_var += f.parameter * f.parameter * c * c;
          break;
      }
    }
    struct Part {
      std::shared_ptr<const detail::MarginalImpl> law;
      double scale;
    };
    std::vector<Part> parts;
    auto trim = [](std::vector<double>& v) {
      double m = 0.0;
      for (double x : v) m = std::max(m, std::abs(x));
      return m;
    };
    const double wmax = trim(widths), emax = trim(weights);
    const double scale = std::max({wmax, emax, std::sqrt(gauss_var)});
    if (wmax > 1e-10 * scale) {
      double var = 0.0;
      for (double w : widths) var += w * w / 12.0;
      parts.push_back({detail::make_uniform_sum_marginal(widths), std::sqrt(var)});
    }
    if (emax > 1e-10 * scale) {
      double var = 0.0;
      for (double w : weights) var += w * w;
      parts.push_back({detail::make_exponential_sum_marginal(weights), std::sqrt(var)});
    }
    if (gauss_var > 1e-20 * scale * scale) {
      parts.push_back({detail::make_normal_marginal(std::sqrt(gauss_var)), std::sqrt(gauss_var)});
    }
    if (parts.empty()) throw InputError("marginal: direction has no support");
    auto law = parts.back().law;
    // convolve the remaining groups, smoothest (Gaussian, then exponential) last
    for (int i = static_cast<int>(parts.size()) - 2; i >= 0; --i)
      law = detail::make_convolution_marginal(parts[i].law, law, parts.back().scale);
    return law;
  }

  std::optional<Matrix> covariance() const override {
    Vector d(dimension());
    for (std::size_t i = 0; i < factors_.size(); ++i)
      d[static_cast<Eigen::Index>(i)] = factor_variance(factors_[i]);
    return Matrix(d.asDiagonal());
  }

  LogLaplaceEval log_laplace(const Vector& xi, LaplaceOrder order) const override {
    const int n = dimension();
    LogLaplaceEval e;
    if (order != LaplaceOrder::Value) e.gradient = Vector::Zero(n);
    if (order == LaplaceOrder::Hessian) e.hessian = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      const FactorEval f = factor_log_laplace(factors_[static_cast<std::size_t>(i)], xi[i], order);
      if (!f.in_domain) return out_of_domain();
      e.value += f.value;
      if (order != LaplaceOrder::Value) e.gradient[i] = f.d1;
      if (order == LaplaceOrder::Hessian) e.hessian(i, i) = f.d2;
    }
    return e;
  }

  const std::vector<Factor>& factors() const { return factors_; }

 private:
  std::vector<Factor> factors_;
  ModelKind kind_;
  bool even_ = true;
};

class PushforwardImpl final : public detail::ModelImpl {
 public:
  PushforwardImpl(MeasureModel base, AffineMap map) : base_(std::move(base)), map_(std::move(map)) {
    const Matrix& t = map_.matrix();
    const Matrix gram = t.transpose() * t;
    const double c2 = gram.trace() / t.rows();
    rotation_invariant_ = base_.is_rotation_invariant() && map_.shift().norm() == 0.0 &&
                          (gram - c2 * Matrix::Identity(t.rows(), t.rows())).norm() <=
                              1e-12 * c2;
  }

  int dimension() const override { return map_.dimension(); }
  ModelKind kind() const override { return ModelKind::AffinePushforward; }
  std::string name() const override { return "AffinePushforward(" + base_.name() + ")"; }
  double log_density(const Vector& y) const override {
    return base_.log_density(map_.invert(y)) - map_.log_abs_det();
  }
  double log_sup_density() const override {
    return base_.log_sup_density() - map_.log_abs_det();
  }
  // |T^{-1}(y - b)| >= (|y| - |b|) / |T|
  Envelope envelope() const override {
    const Envelope e = base_.envelope();
    const double b = e.b / map_.norm();
    return {e.log_a - map_.log_abs_det() + b * map_.shift().norm(), b};
  }
  bool is_even() const override { return base_.is_even() && map_.shift().norm() == 0.0; }
  bool is_rotation_invariant() const override { return rotation_invariant_; }
  void sample_into(RandomStream& rng, Eigen::Ref<Vector> out) const override {
    Vector x(base_.dimension());
    base_.sample_into(rng, x);
    out = map_.apply(x);
  }
  std::shared_ptr<const detail::MarginalImpl> marginal(const Vector& unit) const override {
    const Vector pulled = map_.matrix().transpose() * unit;
    const double scale = pulled.norm();
    return detail::make_affine_marginal(base_.impl().marginal(pulled / scale), scale,
                                        map_.shift().dot(unit));
  }
  std::optional<Matrix> covariance() const override {
    auto c = base_.closed_form_covariance();
    if (!c) return std::nullopt;
    return Matrix(map_.matrix() * *c * map_.matrix().transpose());
  }
  LogLaplaceEval log_laplace(const Vector& xi, LaplaceOrder order) const override {
    const Matrix& t = map_.matrix();
    LogLaplaceEval e = base_.log_laplace(t.transpose() * xi, order);
    if (!e.in_domain) return e;
    e.value += map_.shift().dot(xi);
    if (order != LaplaceOrder::Value) e.gradient = t * e.gradient + map_.shift();
    if (order == LaplaceOrder::Hessian) e.hessian = t * e.hessian * t.transpose();
    return e;
  }

  const MeasureModel& base() const { return base_; }
  const AffineMap& map() const { return map_; }

 private:
  MeasureModel base_;
  AffineMap map_;
  bool rotation_invariant_ = false;
};

}  // namespace

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::IsotropicGaussian:
      return "IsotropicGaussian";
    case ModelKind::UniformBall:
      return "UniformBall";
    case ModelKind::UniformCube:
      return "UniformCube";
    case ModelKind::ProductExponentialCentered:
      return "ProductExponentialCentered";
    case ModelKind::ProductFactors:
      return "ProductFactors";
    case ModelKind::AffinePushforward:
      return "AffinePushforward";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// AffineMap

AffineMap::AffineMap(Matrix matrix, Vector shift)
    : matrix_(std::move(matrix)), shift_(std::move(shift)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() != shift_.size() || shift_.size() == 0)
    throw InputError("affine map: matrix must be square and match the shift length");
  if (!matrix_.allFinite() || !shift_.allFinite())
    throw InputError("affine map: non-finite entries");
  Eigen::JacobiSVD<Matrix> svd(matrix_);
  const auto& sv = svd.singularValues();
  if (!(sv[sv.size() - 1] > 1e-14 * sv[0])) throw InputError("affine map: singular matrix");
  norm_ = sv[0];
  log_abs_det_ = sv.array().log().sum();
  lu_.compute(matrix_);
}

AffineMap AffineMap::identity(int n) {
  return AffineMap(Matrix::Identity(n, n), Vector::Zero(n));
}

AffineMap AffineMap::linear(Matrix matrix) {
  const auto n = matrix.rows();
  return AffineMap(std::move(matrix), Vector::Zero(n));
}

Vector AffineMap::invert(const Vector& y) const { return lu_.solve(y - shift_); }

Vector AffineMap::inverse_linear(const Vector& y) const { return lu_.solve(y); }

AffineMap AffineMap::inverse() const {
  const Matrix inv = lu_.inverse();
  return AffineMap(inv, -inv * shift_);
}

bool AffineMap::is_identity(double tol) const {
  const auto n = matrix_.rows();
  return (matrix_ - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() <= tol &&
         shift_.cwiseAbs().maxCoeff() <= tol;
}

// ---------------------------------------------------------------------------
// MeasureModel

MeasureModel::MeasureModel(std::shared_ptr<const detail::ModelImpl> impl) : impl_(std::move(impl)) {
  log_density_at_zero_ = impl_->log_density(Vector::Zero(impl_->dimension()));
}

MeasureModel MeasureModel::isotropic_gaussian(int n) {
  require_dimension(n);
  return MeasureModel(std::make_shared<GaussianImpl>(n));
}

MeasureModel MeasureModel::uniform_ball(int n, double radius) {
  require_dimension(n);
  require_positive(radius, "radius");
  return MeasureModel(std::make_shared<BallImpl>(n, radius));
}

MeasureModel MeasureModel::volume_one_ball(int n) {
  require_dimension(n);
  return uniform_ball(n, std::exp(-log_unit_ball_volume(n) / n));
}

MeasureModel MeasureModel::uniform_cube(int n, double side) {
  require_dimension(n);
  require_positive(side, "side");
  return MeasureModel(std::make_shared<ProductImpl>(
      std::vector<Factor>(static_cast<std::size_t>(n), Factor::uniform(side)),
      ModelKind::UniformCube));
}

MeasureModel MeasureModel::product_exponential(int n) {
  require_dimension(n);
  return MeasureModel(std::make_shared<ProductImpl>(
      std::vector<Factor>(static_cast<std::size_t>(n), Factor::exponential(1.0)),
      ModelKind::ProductExponentialCentered));
}

MeasureModel MeasureModel::product(std::vector<Factor> factors) {
  if (factors.empty()) throw InputError("product model needs at least one factor");
  for (const auto& f : factors) require_positive(f.parameter, "factor parameter");
  return MeasureModel(std::make_shared<ProductImpl>(std::move(factors), ModelKind::ProductFactors));
}

MeasureModel MeasureModel::pushforward(const MeasureModel& base, const AffineMap& map) {
  if (map.dimension() != base.dimension())
    throw InputError("pushforward: map dimension does not match the model");
  // collapse nested pushforwards into one map over the innermost model
  if (const auto* inner = base.pushforward_map()) {
    AffineMap composed(map.matrix() * inner->matrix(), map.matrix() * inner->shift() + map.shift());
    return MeasureModel(std::make_shared<PushforwardImpl>(*base.pushforward_base(), composed));
  }
  return MeasureModel(std::make_shared<PushforwardImpl>(base, map));
}

int MeasureModel::dimension() const { return impl_->dimension(); }
ModelKind MeasureModel::kind() const { return impl_->kind(); }
std::string MeasureModel::name() const { return impl_->name(); }

double MeasureModel::log_density(const Vector& x) const {
  if (x.size() != dimension())
    throw InputError("log_density: point has length " + std::to_string(x.size()) +
                     ", model dimension is " + std::to_string(dimension()));
  return impl_->log_density(x);
}

double MeasureModel::log_sup_density() const { return impl_->log_sup_density(); }
Envelope MeasureModel::envelope() const { return impl_->envelope(); }
bool MeasureModel::is_even() const { return impl_->is_even(); }
bool MeasureModel::is_rotation_invariant() const { return impl_->is_rotation_invariant(); }

void MeasureModel::sample_into(RandomStream& rng, Eigen::Ref<Vector> out) const {
  impl_->sample_into(rng, out);
}

Matrix MeasureModel::sample(std::uint64_t seed, std::size_t count, const Parallel& par) const {
  if (count < 1) throw InputError("sample: count must be at least 1");
  Matrix out(dimension(), static_cast<Eigen::Index>(count));
  par.for_each(chunk_count(count), [&](std::size_t c) {
    RandomStream rng(seed, c);
    const std::size_t end = std::min(count, (c + 1) * kChunkSize);
    Vector x(dimension());
    for (std::size_t i = c * kChunkSize; i < end; ++i) {
      impl_->sample_into(rng, x);
      out.col(static_cast<Eigen::Index>(i)) = x;
    }
  });
  return out;
}

DirectionalMarginal MeasureModel::marginal(const Vector& direction) const {
  if (direction.size() != dimension()) throw InputError("marginal: direction length mismatch");
  const double norm = direction.norm();
  if (!(std::abs(norm - 1.0) <= 1e-10)) throw InputError("marginal: direction must be a unit vector");
  Vector unit = direction / norm;
  auto impl = impl_->marginal(unit);
  return DirectionalMarginal(std::move(unit), std::move(impl));
}

std::optional<Matrix> MeasureModel::closed_form_covariance() const { return impl_->covariance(); }

LogLaplaceEval MeasureModel::log_laplace(const Vector& xi, LaplaceOrder order) const {
  if (xi.size() != dimension()) throw InputError("log_laplace: length mismatch");
  if (!xi.allFinite()) throw InputError("log_laplace: non-finite argument");
  return impl_->log_laplace(xi, order);
}

const MeasureModel* MeasureModel::pushforward_base() const {
  const auto* p = dynamic_cast<const PushforwardImpl*>(impl_.get());
  return p ? &p->base() : nullptr;
}

const AffineMap* MeasureModel::pushforward_map() const {
  const auto* p = dynamic_cast<const PushforwardImpl*>(impl_.get());
  return p ? &p->map() : nullptr;
}

// ---------------------------------------------------------------------------

CovarianceResult covariance_monte_carlo(const MeasureModel& model, std::uint64_t seed,
                                        std::size_t samples, const Parallel& par) {
  const Matrix x = model.sample(seed, samples, par);
  const int n = model.dimension();
  const double count = static_cast<double>(samples);
  const Vector mean = x.rowwise().sum() / count;
  const Matrix centered = x.colwise() - mean;
  CovarianceResult r;
  r.closed_form = false;
  r.value = centered * centered.transpose() / (count - 1.0);
  r.stderr_ = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Eigen::ArrayXd prod =
          centered.row(i).array() * centered.row(j).array() - r.value(i, j);
      r.stderr_(i, j) = std::sqrt(prod.square().sum() / (count - 1.0) / count);
    }
  return r;
}

CovarianceResult covariance(const MeasureModel& model, std::uint64_t seed, std::size_t samples,
                            const Parallel& par) {
  if (auto c = model.closed_form_covariance()) {
    const auto n = c->rows();
    return {*c, Matrix::Zero(n, n), true};
  }
  return covariance_monte_carlo(model, seed, samples, par);
}

Isotropized isotropize(const MeasureModel& model) {
  const int n = model.dimension();
  const Matrix cov = covariance(model).value;
  if ((cov - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-14)
    return {AffineMap::identity(n), model};
  Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
  const Vector& ev = eig.eigenvalues();
  if (!(ev.minCoeff() > 1e-14 * ev.maxCoeff())) throw NumericError("isotropize: singular covariance");
  const Matrix& v = eig.eigenvectors();
  const Matrix t = v * ev.cwiseSqrt().cwiseInverse().asDiagonal() * v.transpose();
  AffineMap map = AffineMap::linear(t);
  return {map, MeasureModel::pushforward(model, map)};
}

std::vector<Vector> axis_directions(const MeasureModel& model) {
  if (const MeasureModel* base = model.pushforward_base()) {
    std::vector<Vector> out = axis_directions(*base);
    const Matrix& t = model.pushforward_map()->matrix();
    for (Vector& u : out) u = t.transpose().partialPivLu().solve(u).normalized();
    return out;
  }
  const ModelKind kind = model.kind();
  if (kind != ModelKind::UniformCube && kind != ModelKind::ProductExponentialCentered &&
      kind != ModelKind::ProductFactors)
    return {};
  const int n = model.dimension();
  std::vector<Vector> out;
  for (int i = 0; i < n; ++i) {
    out.push_back(Vector::Unit(n, i));
    out.push_back(-Vector::Unit(n, i));
  }
  return out;
}

double isotropic_constant(const MeasureModel& model) {
  const Matrix cov = covariance(model).value;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
  const double log_det = eig.eigenvalues().array().log().sum();
  return std::exp((model.log_sup_density() + 0.5 * log_det) / model.dimension());
}

std::vector<ZooEntry> isotropic_zoo(int n) {
  require_dimension(n);
  return {
      {"gaussian", MeasureModel::isotropic_gaussian(n)},
      {"cube", MeasureModel::uniform_cube(n, std::sqrt(12.0))},
      {"ball", isotropize(MeasureModel::volume_one_ball(n)).model},
      {"exponential", MeasureModel::product_exponential(n)},
  };
}

}  // namespace cramer
