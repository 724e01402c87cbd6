#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <boost/math/special_functions/beta.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include "cramer/errors.hpp"
#include "cramer/quadrature.hpp"
#include "cramer/special.hpp"
#include "model_impl.hpp"

namespace cramer {

DirectionalMarginal::DirectionalMarginal(Vector direction,
                                         std::shared_ptr<const detail::MarginalImpl> impl)
    : direction_(std::move(direction)), impl_(std::move(impl)) {}

double DirectionalMarginal::cdf(double s) const { return impl_->cdf(s); }
double DirectionalMarginal::sf(double s) const { return impl_->sf(s); }
double DirectionalMarginal::density(double s) const { return impl_->density(s); }
double DirectionalMarginal::log_sf(double s) const { return impl_->log_sf(s); }
bool DirectionalMarginal::is_estimate() const { return impl_->is_estimate(); }
double DirectionalMarginal::cdf_halfwidth(double s) const { return impl_->cdf_halfwidth(s); }

namespace detail {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

class NormalMarginal final : public MarginalImpl {
 public:
  NormalMarginal(double sigma, double mean) : sigma_(sigma), mean_(mean) {}
  double cdf(double s) const override { return normal_cdf((s - mean_) / sigma_); }
  double sf(double s) const override { return normal_sf((s - mean_) / sigma_); }
  double density(double s) const override { return normal_pdf((s - mean_) / sigma_) / sigma_; }
  double log_sf(double s) const override { return log_normal_sf((s - mean_) / sigma_); }

 private:
  double sigma_;
  double mean_;
};

// U = <X, e_1> for X uniform on r B_2^n has density proportional to
// (1 - u^2/r^2)^{(n-1)/2}; P(U^2 <= v r^2) = I_v(1/2, (n+1)/2).
class BallMarginal final : public MarginalImpl {
 public:
  BallMarginal(int n, double radius)
      : a_(0.5), b_(0.5 * (n + 1)), radius_(radius), exponent_(0.5 * (n - 1)) {
    log_norm_ = std::lgamma(0.5 * n + 1.0) - std::lgamma(0.5 * (n + 1)) -
                0.5 * std::log(std::numbers::pi) - std::log(radius);
  }

  double upper(double u) const {
    // P(U >= u) for u in [0, 1], via I_{1-u^2}(b, a) = 1 - I_{u^2}(a, b)
    const double one_minus = (1.0 - u) * (1.0 + u);
    if (one_minus <= 0.0) return 0.0;
    return 0.5 * boost::math::ibeta(b_, a_, one_minus);
  }

  double sf(double s) const override {
    const double u = s / radius_;
    if (u >= 1.0) return 0.0;
    if (u <= -1.0) return 1.0;
    return u >= 0.0 ? upper(u) : 1.0 - upper(-u);
  }
  double cdf(double s) const override {
    const double u = s / radius_;
    if (u >= 1.0) return 1.0;
    if (u <= -1.0) return 0.0;
    return u <= 0.0 ? upper(-u) : 1.0 - upper(u);
  }
  double density(double s) const override {
    const double u = s / radius_;
    if (std::abs(u) >= 1.0) return 0.0;
    return std::exp(log_norm_ + exponent_ * std::log((1.0 - u) * (1.0 + u)));
  }

 private:
  double a_;
  double b_;
  double radius_;
  double exponent_;
  double log_norm_;
};

// Y = sum c_i (V_i - 1/2), V_i uniform on [0, 1]. G(v) = P(sum c_i V_i <= v) is
// the truncated-power (generalized Irwin-Hall) sum, always evaluated on the
// half v <= C/2 where few subsets contribute.
class UniformSumMarginal final : public MarginalImpl {
 public:
  explicit UniformSumMarginal(std::vector<double> widths) : widths_(std::move(widths)) {
    total_ = std::accumulate(widths_.begin(), widths_.end(), 0.0);
    long double log_prod = 0.0L;
    for (double c : widths_) log_prod += std::log(static_cast<long double>(c));
    log_prod_ = log_prod;
    const int k = static_cast<int>(widths_.size());
    log_fact_k_ = std::lgamma(k + 1.0L);
    log_fact_km1_ = std::lgamma(static_cast<long double>(k));
    std::sort(widths_.begin(), widths_.end());
  }

  double cdf(double s) const override { return G(s + 0.5 * total_); }
  double sf(double s) const override { return G(0.5 * total_ - s); }
  double density(double s) const override {
    double v = s + 0.5 * total_;
    if (v <= 0.0 || v >= total_) return 0.0;
    if (v > 0.5 * total_) v = total_ - v;
    return static_cast<double>(power_sum(v, static_cast<int>(widths_.size()) - 1,
                                         log_fact_km1_));
  }

 private:
  double G(double v) const {
    if (v <= 0.0) return 0.0;
    if (v >= total_) return 1.0;
    if (v > 0.5 * total_) return 1.0 - G(total_ - v);
    return static_cast<double>(power_sum(v, static_cast<int>(widths_.size()), log_fact_k_));
  }

  // sum over subsets S with c_S < v of (-1)^|S| (v - c_S)^p / (p_fact * prod c)
  long double power_sum(double v, int power, long double log_fact) const {
    long double sum = 0.0L;
    const long double scale = std::exp(-log_prod_ - log_fact);
    visit(0, 0.0L, 1, static_cast<long double>(v), power, sum);
    return std::max(0.0L, sum * scale);
  }

  void visit(std::size_t start, long double partial, int sign, long double v, int power,
             long double& sum) const {
    const long double rest = v - partial;
    sum += sign * (power == 0 ? 1.0L : std::pow(rest, power));
    for (std::size_t i = start; i < widths_.size(); ++i) {
      if (partial + widths_[i] >= v) break;  // widths sorted ascending
      visit(i + 1, partial + widths_[i], -sign, v, power, sum);
    }
  }

  std::vector<double> widths_;
  double total_ = 0.0;
  long double log_prod_ = 0.0L;
  long double log_fact_k_ = 0.0L;
  long double log_fact_km1_ = 0.0L;
};

// Hypoexponential block: sum a_i E_i as a phase-type law with initial vector
// e_1 and sub-generator T (T_ii = -1/a_i, T_{i,i+1} = 1/a_i).
Matrix hypoexponential_generator(const std::vector<double>& scales) {
  const int k = static_cast<int>(scales.size());
  Matrix t = Matrix::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    t(i, i) = -1.0 / scales[i];
    if (i + 1 < k) t(i, i + 1) = 1.0 / scales[i];
  }
  return t;
}

// v = E[e^{T Q}] 1 where Q has sub-generator S (initial e_1). Uses
// int_0^inf e^{Tq} (x) e^{Sq} dq = -(T (+) S)^{-1}.
Vector tilted_exit_vector(const Matrix& t, const Matrix& s) {
  const int k = static_cast<int>(t.rows());
  const int m = static_cast<int>(s.rows());
  if (m == 0) return Vector::Ones(k);
  const Vector exit = -s * Vector::Ones(m);
  Matrix ksum = Matrix::Zero(k * m, k * m);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int j = 0; j < m; ++j) {
        ksum(a * m + j, b * m + j) += t(a, b);
      }
  for (int a = 0; a < k; ++a)
    for (int j = 0; j < m; ++j)
      for (int l = 0; l < m; ++l) ksum(a * m + j, a * m + l) += s(j, l);
  const Matrix integral = -ksum.inverse();
  Vector v = Vector::Zero(k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int l = 0; l < m; ++l) v[a] += integral(a * m + 0, b * m + l) * exit[l];
  return v;
}

class ExponentialSumMarginal final : public MarginalImpl {
 public:
  explicit ExponentialSumMarginal(const std::vector<double>& weights) {
    std::vector<double> pos, neg;
    for (double w : weights) {
      shift_ += w;
      if (w > 0) pos.push_back(w);
      if (w < 0) neg.push_back(-w);
    }
    // sort scales so the chain is deterministic
    std::sort(pos.begin(), pos.end());
    std::sort(neg.begin(), neg.end());
    t_pos_ = hypoexponential_generator(pos);
    t_neg_ = hypoexponential_generator(neg);
    if (!pos.empty()) v_pos_ = tilted_exit_vector(t_pos_, t_neg_);
    if (!neg.empty()) v_neg_ = tilted_exit_vector(t_neg_, t_pos_);
  }

  double sf(double s) const override {
    const double z = s + shift_;
    if (z >= 0.0) return tail(t_pos_, v_pos_, z);
    return t_pos_.rows() == 0 ? head(t_neg_, -z) : 1.0 - tail(t_neg_, v_neg_, -z);
  }
  double cdf(double s) const override {
    const double z = s + shift_;
    if (z < 0.0) return tail(t_neg_, v_neg_, -z);
    return t_neg_.rows() == 0 ? head(t_pos_, z) : 1.0 - tail(t_pos_, v_pos_, z);
  }
  double density(double s) const override {
    const double z = s + shift_;
    return z >= 0.0 ? tail_density(t_pos_, v_pos_, z) : tail_density(t_neg_, v_neg_, -z);
  }

 private:
  // P(P - Q > z) for z >= 0, P with generator t
  static double tail(const Matrix& t, const Vector& v, double z) {
    if (t.rows() == 0) return 0.0;
    const Matrix e = (t * z).exp();
    return std::clamp(e.row(0).dot(v), 0.0, 1.0);
  }
  // P(P <= y) for a one-sided sum, as e_1 phi1(T y) (-T y 1): all terms are
  // nonnegative, so small probabilities near the support end keep their digits
  static double head(const Matrix& t, double y) {
    const Eigen::Index k = t.rows();
    Matrix aug = Matrix::Zero(2 * k, 2 * k);
    aug.topLeftCorner(k, k) = t * y;
    aug.topRightCorner(k, k).setIdentity();
    const Matrix e = aug.exp();
    const Vector exit = -(t * y) * Vector::Ones(k);
    return std::clamp(e.topRightCorner(k, k).row(0).dot(exit), 0.0, 1.0);
  }
  static double tail_density(const Matrix& t, const Vector& v, double z) {
    if (t.rows() == 0) return 0.0;
    const Matrix e = (t * z).exp();
    return std::max(0.0, -(e.row(0) * t).dot(v));
  }

  double shift_ = 0.0;
  Matrix t_pos_, t_neg_;
  Vector v_pos_, v_neg_;
};

class AffineMarginal final : public MarginalImpl {
 public:
  AffineMarginal(std::shared_ptr<const MarginalImpl> base, double scale, double shift)
      : base_(std::move(base)), scale_(scale), shift_(shift) {}
  double cdf(double s) const override { return base_->cdf((s - shift_) / scale_); }
  double sf(double s) const override { return base_->sf((s - shift_) / scale_); }
  double density(double s) const override {
    return base_->density((s - shift_) / scale_) / scale_;
  }
  double log_sf(double s) const override { return base_->log_sf((s - shift_) / scale_); }
  bool is_estimate() const override { return base_->is_estimate(); }
  double cdf_halfwidth(double s) const override {
    return base_->cdf_halfwidth((s - shift_) / scale_);
  }

 private:
  std::shared_ptr<const MarginalImpl> base_;
  double scale_;
  double shift_;
};

// Y = A + B for independent A, B; integrates over the effective support of B.
class ConvolutionMarginal final : public MarginalImpl {
 public:
  ConvolutionMarginal(std::shared_ptr<const MarginalImpl> a,
                      std::shared_ptr<const MarginalImpl> b, double b_scale)
      : a_(std::move(a)), b_(std::move(b)) {
    lo_ = -b_scale;
    while (b_->cdf(lo_) > 1e-16 && lo_ > -1e6 * b_scale) lo_ *= 2.0;
    hi_ = b_scale;
    while (b_->sf(hi_) > 1e-16 && hi_ < 1e6 * b_scale) hi_ *= 2.0;
  }
  double cdf(double s) const override {
    return std::clamp(
        integrate_panels([&](double y) { return a_->cdf(s - y) * b_->density(y); }, lo_, hi_,
                         kPanels),
        0.0, 1.0);
  }
  double sf(double s) const override {
    return std::clamp(
        integrate_panels([&](double y) { return a_->sf(s - y) * b_->density(y); }, lo_, hi_,
                         kPanels),
        0.0, 1.0);
  }
  double density(double s) const override {
    return std::max(0.0, integrate_panels(
                             [&](double y) { return a_->density(s - y) * b_->density(y); },
                             lo_, hi_, kPanels));
  }

 private:
  static constexpr int kPanels = 64;
  std::shared_ptr<const MarginalImpl> a_;
  std::shared_ptr<const MarginalImpl> b_;
  double lo_ = 0.0;
  double hi_ = 0.0;
};

class SampleMarginal final : public MarginalImpl {
 public:
  explicit SampleMarginal(std::vector<double> values) : values_(std::move(values)) {
    std::sort(values_.begin(), values_.end());
    const double n = static_cast<double>(values_.size());
    const double mean = std::accumulate(values_.begin(), values_.end(), 0.0) / n;
    double var = 0.0;
    for (double v : values_) var += (v - mean) * (v - mean);
    var /= std::max(1.0, n - 1.0);
    bandwidth_ = 1.06 * std::sqrt(var) * std::pow(n, -0.2);
  }
  double cdf(double s) const override {
    return static_cast<double>(std::upper_bound(values_.begin(), values_.end(), s) -
                               values_.begin()) /
           static_cast<double>(values_.size());
  }
  double sf(double s) const override {
    return static_cast<double>(values_.end() -
                               std::lower_bound(values_.begin(), values_.end(), s)) /
           static_cast<double>(values_.size());
  }
  double density(double s) const override {
    const auto lo = std::lower_bound(values_.begin(), values_.end(), s - bandwidth_);
    const auto hi = std::upper_bound(values_.begin(), values_.end(), s + bandwidth_);
    return static_cast<double>(hi - lo) / (2.0 * bandwidth_ * values_.size());
  }
  bool is_estimate() const override { return true; }
  double cdf_halfwidth(double s) const override {
    // Wilson score interval, z = 1.96
    const double n = static_cast<double>(values_.size());
    const double p = cdf(s);
    const double z2 = 1.96 * 1.96;
    return 1.96 * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / (1 + z2 / n);
  }

 private:
  std::vector<double> values_;
  double bandwidth_ = 0.0;
};

}  // namespace

double MarginalImpl::log_sf(double s) const {
  const double p = sf(s);
  return p > 0.0 ? std::log(p) : kNegInf;
}

std::shared_ptr<const MarginalImpl> make_normal_marginal(double sigma, double mean) {
  return std::make_shared<NormalMarginal>(sigma, mean);
}

std::shared_ptr<const MarginalImpl> make_ball_marginal(int n, double radius) {
  return std::make_shared<BallMarginal>(n, radius);
}

std::shared_ptr<const MarginalImpl> make_uniform_sum_marginal(std::vector<double> widths) {
  double total = 0.0;
  for (double& w : widths) {
    w = std::abs(w);
    total += w;
  }
  std::erase_if(widths, [&](double w) { return w <= 1e-10 * total; });
  if (widths.empty()) throw InputError("uniform sum marginal: all widths vanish");
  return std::make_shared<UniformSumMarginal>(std::move(widths));
}

std::shared_ptr<const MarginalImpl> make_exponential_sum_marginal(std::vector<double> weights) {
  double scale = 0.0;
  for (double w : weights) scale = std::max(scale, std::abs(w));
  // a dropped term w (E - 1) is centered with spread |w|, so the law moves by O(w^2);
  // keeping it makes the generator stiff and the tail noisy
  std::erase_if(weights, [&](double w) { return std::abs(w) <= 1e-6 * scale; });
  if (weights.empty()) throw InputError("exponential sum marginal: all weights vanish");
  return std::make_shared<ExponentialSumMarginal>(weights);
}

std::shared_ptr<const MarginalImpl> make_affine_marginal(
    std::shared_ptr<const MarginalImpl> base, double scale, double shift) {
  if (!(scale > 0.0)) throw InputError("affine marginal: scale must be positive");
  return std::make_shared<AffineMarginal>(std::move(base), scale, shift);
}

std::shared_ptr<const MarginalImpl> make_convolution_marginal(
    std::shared_ptr<const MarginalImpl> a, std::shared_ptr<const MarginalImpl> b,
    double b_scale) {
  return std::make_shared<ConvolutionMarginal>(std::move(a), std::move(b), b_scale);
}

std::shared_ptr<const MarginalImpl> make_sample_marginal(std::vector<double> values) {
  if (values.empty()) throw InputError("sample marginal: empty sample");
  return std::make_shared<SampleMarginal>(std::move(values));
}

}  // namespace detail
}  // namespace cramer
