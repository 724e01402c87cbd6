#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cramer/depth.hpp"
#include "cramer/measures.hpp"
#include "cramer/parallel.hpp"

namespace cramer {

/// B: {Lambda* <= t}. R: {f >= e^{-t} f(0)}. K: Ball's body. Zplus: one-sided
/// L_t-centroid body. T: {depth >= e^{-t}}.
enum class Family { B, R, K, Zplus, T };

std::string to_string(Family family);
/// Accepts "B", "R", "K", "Zplus", "T". Throws InputError otherwise.
Family parse_family(const std::string& name);

struct BodySpec {
  Family family;
  double t;
  double scale = 1.0;
};

/// Largest admissible parameter of the K family.
inline constexpr double kMaxBallBodyParameter = 500.0;

/// scale * radial function of the body in direction theta; for Zplus the
/// support function h(theta) is returned instead.
double radial(const MeasureModel& model, const BodySpec& spec, const Vector& theta,
              const DepthOptions& depth_options = {});

struct RadialProfile {
  BodySpec spec;
  std::vector<Vector> directions;
  std::vector<double> values;
};

RadialProfile radial_profile(const MeasureModel& model, const BodySpec& spec,
                             const std::vector<Vector>& directions, const Parallel& par = {});

/// (E <X, u>_+^t)^{1/t} for any u (homogeneous of degree 1).
double zplus_support(const MeasureModel& model, double t, const Vector& u);
/// (E |<X, u>|^t)^{1/t}.
double centroid_support(const MeasureModel& model, double t, const Vector& u);

/// Z_t^+ with its support function tabulated on a direction grid; radial values
/// come from minimizing h(u)/<theta, u> over the grid with local refinement.
class ZplusBody {
 public:
  ZplusBody(const MeasureModel& model, double t, int grid = 256);

  double t() const { return t_; }
  double support(const Vector& u) const;
  /// Upper estimate of the radial function (the minimization is local).
  double radial(const Vector& theta) const;
  bool contains(const Vector& x) const;

 private:
  MeasureModel model_;
  double t_;
  bool rotation_invariant_;
  double invariant_h_ = 0.0;
  std::vector<Vector> grid_;
  std::vector<double> grid_h_;
};

struct InclusionReport {
  std::string claim;
  std::size_t directions = 0;
  /// min over directions of (outer - inner) / outer; negative means violated.
  double worst_margin = 0.0;
  std::size_t violations = 0;
  double tol = 0.0;
  /// How the comparison was carried out.
  std::string semantics;
  /// Per-direction margins.
  std::vector<double> margins;

  bool holds() const { return violations == 0; }
};

/// inner.scale * inner \subseteq outer.scale * outer, tested per direction.
InclusionReport inclusion_check(const MeasureModel& model, const BodySpec& inner,
                                const BodySpec& outer, const std::vector<Vector>& directions,
                                double tol = 1e-6, const Parallel& par = {},
                                const std::string& claim = "");

/// Gamma(t+1)^{1/t}/Gamma(s+1)^{1/s} K_s in K_t in e^{n/t - n/s} K_s for t <= s.
InclusionReport kt_chain_check(const MeasureModel& model, double t, double s,
                               const std::vector<Vector>& directions, double tol = 1e-6,
                               const Parallel& par = {});

struct MeasureEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::size_t samples = 0;
};

/// Monte-Carlo mu(scale * body) by membership of fresh samples.
MeasureEstimate body_measure(const MeasureModel& model, const BodySpec& spec, std::uint64_t seed,
                             std::size_t samples, const Parallel& par = {},
                             const DepthOptions& depth_options = {});

/// Membership of each column of `points` in scale * body.
std::vector<char> body_membership(const MeasureModel& model, const BodySpec& spec,
                                  const Matrix& points, const Parallel& par = {},
                                  const DepthOptions& depth_options = {});

struct DilationReport {
  double delta = 0.0;
  /// mu((1 + delta) A)
  double dilated = 0.0;
  /// mu(A)
  double base = 0.0;
  /// e^{2 n delta}
  double factor = 1.0;
  /// standard error of dilated - factor * base from paired samples
  double stderr_ = 0.0;
  bool holds = true;
};

/// mu((1 + delta) A) <= e^{2 n delta} mu(A), both sides on shared samples, 3 sigma.
DilationReport dilation_measure_check(const MeasureModel& model, const BodySpec& body,
                                      double delta, std::uint64_t seed, std::size_t samples,
                                      const Parallel& par = {});

struct RayProfileReport {
  /// sup{r : g(r) >= e^{-alpha m} g(0)}
  double rho = 0.0;
  /// int_0^rho r^m g
  double head = 0.0;
  /// int_0^inf r^m g
  double total = 0.0;
  double ratio = 0.0;
  /// 1 - e^{-alpha m / 4}
  double bound = 0.0;
  bool holds = true;
};

/// For log-concave g on [0, inf) given by ln g (may be -inf), with g(0) > 0.
RayProfileReport ray_profile_lemma_check(const std::function<double(double)>& log_g, double m,
                                         double alpha);

}  // namespace cramer
