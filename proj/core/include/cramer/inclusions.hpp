#pragma once

#include <map>
#include <string>
#include <vector>

#include "cramer/bodies.hpp"

namespace cramer {

struct ClaimOutcome {
  std::string claim;
  std::string statement;
  /// Asserted inclusions; each must have zero violations.
  std::vector<InclusionReport> reports;
  /// Reported-only comparisons (fits, scans).
  std::vector<InclusionReport> diagnostics;
  /// Fitted constants and scan results, e.g. "c1_fitted", "s0_empirical".
  std::map<std::string, double> measured;

  bool holds() const;
};

/// Names accepted by check_claim, in a fixed order.
const std::vector<std::string>& claim_names();

/// Runs one inclusion claim over its built-in parameter set. Claims that
/// assume an isotropic measure expect an isotropic model. Throws InputError
/// on an unknown name.
ClaimOutcome check_claim(const std::string& name, const MeasureModel& model,
                         const std::vector<Vector>& directions, double tol = 1e-6,
                         const Parallel& par = {});

/// e Gamma(s+1)^{1/s} / s, the scaling that carries Z_t^+ into B_s.
double zplus_to_cramer_constant(double s);

/// Largest gamma with c gamma k / (k!)^{1/k} <= 1/2 for all 1 <= k <= k_max.
double moment_gamma(double c, int k_max = 1000);

}  // namespace cramer
