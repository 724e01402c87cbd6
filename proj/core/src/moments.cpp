#include "cramer/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cramer/cramer.hpp"
#include "cramer/errors.hpp"
#include "cramer/rng.hpp"

namespace cramer {

namespace {

constexpr std::uint64_t kTailStream = 0x7A11;
constexpr int kTailGrid = 60;

struct Moments {
  double mean = 0.0;
  double stderr_ = 0.0;
};

Moments mean_and_error(const std::vector<double>& y) {
  const double n = static_cast<double>(y.size());
  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : y) ss += (v - mean) * (v - mean);
  return {mean, n > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0};
}

void require_samples(std::size_t samples) {
  if (samples < 2) throw InputError("at least 2 samples required");
}

// The trapezoid rule on the t grid applied to the empirical tail
// is a linear functional of the sample: each Lambda* value contributes the
// integral of p t^{p-1} 1[lambda > t] over the rule. This returns those weights.
std::vector<double> trapezoid_weights(const std::vector<double>& lambda, double p) {
  std::vector<double> sorted = lambda;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  const double t_max = std::max(sorted[n > 10 ? n - 10 : n - 1], 0.02);
  std::vector<double> nodes;
  for (int i = 0; i < kTailGrid; ++i)
    nodes.push_back(0.01 * std::pow(t_max / 0.01, static_cast<double>(i) / (kTailGrid - 1)));
  auto g = [&](double t) { return p * std::pow(t, p - 1.0); };
  std::vector<double> w(lambda.size());
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    // [0, t_1] exactly, where p t^{p-1} may be singular
    double acc = std::pow(std::min(lambda[i], nodes[0]), p);
    for (std::size_t j = 1; j < nodes.size() && lambda[i] > nodes[j - 1]; ++j) {
      const double a = nodes[j - 1], b = nodes[j];
      acc += 0.5 * (b - a) * (g(a) + (lambda[i] > b ? g(b) : 0.0));
    }
    w[i] = acc;
  }
  return w;
}

}  // namespace

std::string to_string(MomentEstimator estimator) {
  return estimator == MomentEstimator::DirectMC ? "direct_mc" : "tail_integral";
}

MomentEstimator parse_estimator(const std::string& name) {
  if (name == "direct_mc") return MomentEstimator::DirectMC;
  if (name == "tail_integral") return MomentEstimator::TailIntegral;
  throw InputError("unknown estimator: " + name);
}

CramerSample cramer_sample(const MeasureModel& model, std::uint64_t seed, std::size_t samples,
                           const Parallel& par) {
  require_samples(samples);
  const Matrix pts = model.sample(seed, samples, par);
  const std::vector<double> all = par.map<double>(samples, [&](std::size_t i) {
    return cramer_value(model, pts.col(static_cast<Eigen::Index>(i)));
  });
  CramerSample s;
  s.values.reserve(samples);
  for (double v : all) {
    if (std::isfinite(v)) s.values.push_back(v);
    else ++s.excluded;
  }
  if (static_cast<double>(s.excluded) > 1e-3 * static_cast<double>(samples))
    throw NumericError("Cramer transform diverged at " + std::to_string(s.excluded) + " of " +
                       std::to_string(samples) + " samples");
  return s;
}

MomentReport lp_moment(const MeasureModel& model, double p, std::uint64_t seed,
                       std::size_t samples, MomentEstimator estimator, const Parallel& par) {
  if (!(p > 0.0)) throw InputError("moment order must be positive");
  MomentReport r;
  r.model = model.name();
  r.parameter = p;
  r.estimator = estimator;
  const std::uint64_t s = estimator == MomentEstimator::DirectMC ? seed : derive_seed(seed, kTailStream);
  const CramerSample sample = cramer_sample(model, s, samples, par);
  r.samples = samples;
  r.excluded = sample.excluded;
  std::vector<double> y;
  if (estimator == MomentEstimator::DirectMC) {
    y.reserve(sample.values.size());
    for (double v : sample.values) y.push_back(std::pow(v, p));
  } else {
    y = trapezoid_weights(sample.values, p);
  }
  const Moments m = mean_and_error(y);
  r.estimate = m.mean;
  r.stderr_ = m.stderr_;
  r.norm = std::pow(m.mean, 1.0 / p);
  r.norm_stderr = m.mean > 0.0 ? r.norm / (p * m.mean) * m.stderr_ : 0.0;
  return r;
}

MomentReport exp_moment(const MeasureModel& model, double c_over_n, std::uint64_t seed,
                        std::size_t samples, const Parallel& par) {
  if (!(c_over_n > 0.0)) throw InputError("c/n must be positive");
  const CramerSample sample = cramer_sample(model, seed, samples, par);
  std::vector<double> y;
  y.reserve(sample.values.size());
  for (double v : sample.values) y.push_back(std::exp(c_over_n * v));
  MomentReport r;
  r.model = model.name();
  r.parameter = c_over_n;
  const Moments m = mean_and_error(y);
  r.estimate = m.mean;
  r.stderr_ = m.stderr_;
  r.samples = samples;
  r.excluded = sample.excluded;
  r.tail = heavy_tail_diagnostic(std::move(y));
  return r;
}

BetaReport beta_ratio(const MeasureModel& model, std::uint64_t seed, std::size_t samples,
                      const Parallel& par) {
  const CramerSample sample = cramer_sample(model, seed, samples, par);
  const std::vector<double>& y = sample.values;
  const double n = static_cast<double>(y.size());
  double m1 = 0.0, m2 = 0.0;
  for (double v : y) {
    m1 += v;
    m2 += v * v;
  }
  m1 /= n;
  m2 /= n;
  // covariance of (mean Y, mean Y^2)
  double v11 = 0.0, v12 = 0.0, v22 = 0.0;
  for (double v : y) {
    const double a = v - m1, b = v * v - m2;
    v11 += a * a;
    v12 += a * b;
    v22 += b * b;
  }
  const double denom = (n - 1.0) * n;
  v11 /= denom;
  v12 /= denom;
  v22 /= denom;
  BetaReport r;
  r.samples = samples;
  r.excluded = sample.excluded;
  r.tau = m1;
  r.tau_stderr = std::sqrt(v11);
  r.beta = m2 / (m1 * m1) - 1.0;
  const double d1 = -2.0 * m2 / (m1 * m1 * m1), d2 = 1.0 / (m1 * m1);
  r.beta_stderr = std::sqrt(std::max(0.0, d1 * d1 * v11 + 2.0 * d1 * d2 * v12 + d2 * d2 * v22));
  return r;
}

MeasureModel family_model(const std::string& family, int n) {
  if (family == "gaussian") return MeasureModel::isotropic_gaussian(n);
  if (family == "cube") return MeasureModel::uniform_cube(n, 1.0);
  if (family == "ball") return MeasureModel::volume_one_ball(n);
  if (family == "exponential") return MeasureModel::product_exponential(n);
  throw InputError("unknown model family: " + family);
}

GrowthFit growth_fit(const std::string& family, const std::vector<int>& n_range, double p,
                     std::uint64_t seed, std::size_t samples, const Parallel& par) {
  GrowthFit fit;
  fit.family = family;
  fit.p = p;
  for (int n : n_range) {
    if (n < 1 || n > 8) throw InputError("growth_fit: dimensions must lie in [1, 8]");
    const MomentReport m = lp_moment(family_model(family, n), p, derive_seed(seed, static_cast<std::uint64_t>(n)),
                                     samples, MomentEstimator::DirectMC, par);
    GrowthRow row;
    row.n = n;
    row.norm = m.norm;
    row.stderr_ = m.norm_stderr;
    row.per_n = m.norm / n;
    row.per_n_log_n = n > 1 ? m.norm / (n * std::log(static_cast<double>(n)))
                            : std::numeric_limits<double>::quiet_NaN();
    fit.rows.push_back(row);
  }
  return fit;
}

}  // namespace cramer
