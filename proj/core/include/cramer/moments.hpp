#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cramer/depth.hpp"
#include "cramer/measures.hpp"
#include "cramer/parallel.hpp"

namespace cramer {

enum class MomentEstimator { DirectMC, TailIntegral };

/// "direct_mc", "tail_integral".
std::string to_string(MomentEstimator estimator);
MomentEstimator parse_estimator(const std::string& name);

/// Lambda* at fresh samples with the divergent ones removed.
struct CramerSample {
  std::vector<double> values;
  /// Samples whose transform diverged (boundary hits).
  std::size_t excluded = 0;
};

/// Throws NumericError when more than 0.1% of the samples diverge.
CramerSample cramer_sample(const MeasureModel& model, std::uint64_t seed, std::size_t samples,
                           const Parallel& par = {});

struct MomentReport {
  std::string model;
  /// p for L^p moments, c/n for exponential moments.
  double parameter = 0.0;
  MomentEstimator estimator = MomentEstimator::DirectMC;
  /// E Lambda*^p, or E exp((c/n) Lambda*).
  double estimate = 0.0;
  double stderr_ = 0.0;
  /// (E Lambda*^p)^{1/p} with a delta-method standard error; L^p moments only.
  double norm = 0.0;
  double norm_stderr = 0.0;
  std::size_t samples = 0;
  std::size_t excluded = 0;
  /// Set for exponential moments.
  HeavyTailDiagnostic tail;
};

/// E Lambda*(X)^p. The tail-integral estimator integrates p t^{p-1} (1 - mu(B_t))
/// by the trapezoid rule on 60 log-spaced t (from 0.01 up to where the tail is
/// below 10/samples), using a sample independent of the direct estimator.
MomentReport lp_moment(const MeasureModel& model, double p, std::uint64_t seed,
                       std::size_t samples, MomentEstimator estimator = MomentEstimator::DirectMC,
                       const Parallel& par = {});

/// E exp((c/n) Lambda*(X)) with a Hill diagnostic on the summands.
MomentReport exp_moment(const MeasureModel& model, double c_over_n, std::uint64_t seed,
                        std::size_t samples, const Parallel& par = {});

struct BetaReport {
  /// E Lambda*
  double tau = 0.0;
  double tau_stderr = 0.0;
  /// Var(Lambda*) / tau^2
  double beta = 0.0;
  double beta_stderr = 0.0;
  std::size_t samples = 0;
  std::size_t excluded = 0;
};

BetaReport beta_ratio(const MeasureModel& model, std::uint64_t seed, std::size_t samples,
                      const Parallel& par = {});

struct GrowthRow {
  int n = 0;
  double norm = 0.0;
  double stderr_ = 0.0;
  /// norm / n
  double per_n = 0.0;
  /// norm / (n ln n); NaN for n = 1.
  double per_n_log_n = 0.0;
};

struct GrowthFit {
  std::string family;
  double p = 1.0;
  std::vector<GrowthRow> rows;
};

/// Builds the family ("gaussian", "cube", "ball", "exponential") in each dimension
/// of n_range (each in [1, 8]) and reports ||Lambda*||_p against n and n ln n.
GrowthFit growth_fit(const std::string& family, const std::vector<int>& n_range, double p,
                     std::uint64_t seed, std::size_t samples, const Parallel& par = {});

/// The named model family in dimension n (isotropic Gaussian, unit-volume cube
/// and ball, centered exponential product).
MeasureModel family_model(const std::string& family, int n);

}  // namespace cramer
