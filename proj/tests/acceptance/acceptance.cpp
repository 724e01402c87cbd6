#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cramer/bodies.hpp"
#include "cramer/cramer.hpp"
#include "cramer/depth.hpp"
#include "cramer/directions.hpp"
#include "cramer/floating.hpp"
#include "cramer/inclusions.hpp"
#include "cramer/moments.hpp"
#include "cramer/polytopes.hpp"
#include "cramer/rng.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;
using namespace cramer;

namespace {

struct Run {
  std::uint64_t seed = 1;
  Parallel par;
};

struct Outcome {
  bool pass = true;
  std::string detail;
  Json artifact = Json::object();
};

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;  // 0: no runtime requirement
  std::function<Outcome(const Run&)> run;
};

Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// fails the outcome and keeps the first reason
void require(Outcome& o, bool ok, const std::string& why) {
  if (ok) return;
  if (o.pass) o.detail = why;
  o.pass = false;
}

double gaussian_tail(double r) { return 0.5 * std::erfc(r / std::sqrt(2.0)); }

Outcome gaussian_exactness(const Run& run) {
  Outcome o;
  double worst_value = 0.0, worst_radial = 0.0;
  for (int n = 1; n <= 8; ++n) {
    const MeasureModel g = MeasureModel::isotropic_gaussian(n);
    RandomStream rng(run.seed, 100 + n);
    for (int i = 0; i < 1000; ++i) {
      Vector x(n);
      const double scale = 3.0 * rng.uniform();
      for (int k = 0; k < n; ++k) x(k) = scale * rng.normal();
      const double err = std::abs(cramer_value(g, x) - 0.5 * x.squaredNorm());
      worst_value = std::max(worst_value, err);
    }
    for (const Vector& theta : sphere_directions(n, 16, run.seed))
      for (double t : {0.5, 2.0, 8.0}) {
        const double r = std::sqrt(2.0 * t);
        worst_radial = std::max(worst_radial, std::abs(radial(g, {Family::B, t}, theta) - r));
        worst_radial = std::max(worst_radial, std::abs(radial(g, {Family::R, t}, theta) - r));
      }
  }
  require(o, worst_value <= 1e-8, "Lambda* error " + fmt("%.3g", worst_value));
  require(o, worst_radial <= 1e-7, "radial error " + fmt("%.3g", worst_radial));
  o.artifact = {{"max_value_error", worst_value}, {"max_radial_error", worst_radial}};
  if (o.pass) o.detail = "max |Lambda* - |x|^2/2| = " + fmt("%.2g", worst_value) +
                         ", max radial error " + fmt("%.2g", worst_radial);
  return o;
}

Outcome one_dimensional_oracles(const Run&) {
  Outcome o;
  const MeasureModel e = MeasureModel::product_exponential(1);
  double worst = 0.0;
  const int m = 400;
  for (int k = 0; k < m; ++k) {
    const double x = -0.99 + 20.99 * (k + 0.5) / m;
    const double err = std::abs(cramer_value(e, Vector::Constant(1, x)) - (x - std::log1p(x)));
    worst = std::max(worst, err);
  }
  const MeasureModel c = MeasureModel::uniform_cube(1, 1.0);
  const LegendreResult lo = cramer_transform(c, Vector::Constant(1, -0.5));
  const LegendreResult hi = cramer_transform(c, Vector::Constant(1, 0.5));
  const bool flagged = lo.status == LegendreStatus::DivergedToInfinity &&
                       hi.status == LegendreStatus::DivergedToInfinity;
  require(o, worst <= 1e-8, "exponential error " + fmt("%.3g", worst));
  require(o, flagged, "cube boundary not flagged diverged");
  o.artifact = {{"max_exponential_error", worst},
                {"cube_minus_half", to_string(lo.status)},
                {"cube_plus_half", to_string(hi.status)}};
  if (o.pass) o.detail = "max error " + fmt("%.2g", worst) + ", x = +-1/2 diverged";
  return o;
}

Outcome duality(const Run& run) {
  Outcome o;
  RandomStream rng(run.seed, 300);
  double worst_g = 0.0, worst_e = 0.0;
  const MeasureModel g = MeasureModel::isotropic_gaussian(2);
  const MeasureModel e = MeasureModel::product_exponential(1);
  for (int i = 0; i < 50; ++i) {
    Vector xi(2);
    xi << rng.normal(), rng.normal();
    worst_g = std::max(worst_g, biconjugate_residual(g, xi));
    worst_e = std::max(worst_e, biconjugate_residual(e, Vector::Constant(1, -3.0 + 3.8 * rng.uniform())));
  }
  require(o, worst_g <= 1e-4, "gaussian residual " + fmt("%.3g", worst_g));
  require(o, worst_e <= 1e-4, "exponential residual " + fmt("%.3g", worst_e));
  o.artifact = {{"gaussian_max_residual", worst_g}, {"exponential_max_residual", worst_e}};
  if (o.pass) o.detail = "max residual " + fmt("%.2g", std::max(worst_g, worst_e));
  return o;
}

Outcome density_level_mass(const Run& run) {
  Outcome o;
  Json rows = Json::array();
  double worst = 1.0;
  for (int n = 2; n <= 4; ++n)
    for (const ZooEntry& z : isotropic_zoo(n))
      for (double t : {5.0 * (n - 1), 8.0 * n, 12.0 * n}) {
        const MeasureEstimate m = body_measure(z.model, {Family::R, t},
                                               derive_seed(run.seed, 400 + 10 * n), 100000, run.par);
        const double bound = 1.0 - std::exp(-t / 4.0);
        const bool ok = m.estimate >= bound - 3.0 * m.stderr_;
        worst = std::min(worst, m.estimate - bound + 3.0 * m.stderr_);
        require(o, ok, z.label + " n=" + std::to_string(n) + " t=" + fmt("%g", t));
        rows.push_back({{"model", z.label}, {"n", n}, {"t", t}, {"estimate", m.estimate},
                        {"stderr", m.stderr_}, {"bound", bound}, {"holds", ok}});
      }
  o.artifact = {{"rows", rows}};
  if (o.pass) o.detail = std::to_string(rows.size()) + " cells, min slack " + fmt("%.3g", worst);
  return o;
}

Outcome inclusion_suite(const Run& run) {
  Outcome o;
  Json rows = Json::array();
  std::size_t checks = 0;
  for (int n = 2; n <= 3; ++n) {
    const std::vector<Vector> dirs = sphere_directions(n, 128, run.seed);
    for (const ZooEntry& z : isotropic_zoo(n))
      for (const std::string& name : claim_names()) {
        // the regularity and B-versus-Z comparisons are not part of this suite
        if (name == "regularity" || name == "prop:B<Z") continue;
        const ClaimOutcome c = check_claim(name, z.model, dirs, 1e-6, run.par);
        Json parts = Json::array();
        for (const InclusionReport& r : c.reports) {
          parts.push_back({{"claim", r.claim}, {"violations", r.violations},
                           {"worst_margin", num(r.worst_margin)}});
          ++checks;
        }
        Json measured = Json::object();
        for (const auto& [k, v] : c.measured) measured[k] = num(v);
        require(o, c.holds(), name + " on " + z.label + " n=" + std::to_string(n));
        rows.push_back({{"model", z.label}, {"n", n}, {"claim", name}, {"holds", c.holds()},
                        {"reports", parts}, {"measured", measured}});
      }
  }
  o.artifact = {{"rows", rows}};
  if (o.pass) o.detail = std::to_string(rows.size()) + " claims, " + std::to_string(checks) +
                         " inclusion checks, 0 violations";
  return o;
}

Outcome dilation(const Run& run) {
  Outcome o;
  Json rows = Json::array();
  for (int n = 2; n <= 3; ++n)
    for (const ZooEntry& z : isotropic_zoo(n))
      for (Family f : {Family::B, Family::R})
        for (double delta : {0.05, 0.1, 0.3}) {
          const BodySpec body{f, 2.0 * n};
          const DilationReport r = dilation_measure_check(
              z.model, body, delta, derive_seed(run.seed, 600 + n), 100000, run.par);
          require(o, r.holds, z.label + " " + to_string(f) + " delta=" + fmt("%g", delta));
          rows.push_back({{"model", z.label}, {"n", n}, {"family", to_string(f)},
                          {"t", body.t}, {"delta", delta}, {"dilated", r.dilated},
                          {"base", r.base}, {"factor", r.factor}, {"stderr", r.stderr_},
                          {"holds", r.holds}});
        }
  o.artifact = {{"rows", rows}};
  if (o.pass) o.detail = std::to_string(rows.size()) + " cells hold";
  return o;
}

Outcome moment_growth(const Run& run) {
  Outcome o;
  Json fits = Json::object();
  std::vector<int> dims;
  for (int n = 2; n <= 8; ++n) dims.push_back(n);
  double lo = 1e9, hi = 0.0;
  for (double p : {1.0, 2.0}) {
    const GrowthFit fit = growth_fit("ball", dims, p, derive_seed(run.seed, 700 + static_cast<int>(p)),
                                     100000, run.par);
    Json rows = Json::array();
    for (const GrowthRow& r : fit.rows) {
      lo = std::min(lo, r.per_n_log_n);
      hi = std::max(hi, r.per_n_log_n);
      rows.push_back({{"n", r.n}, {"norm", r.norm}, {"stderr", r.stderr_},
                      {"per_n_log_n", r.per_n_log_n}});
    }
    fits[p == 1.0 ? "ball_L1" : "ball_L2"] = rows;
  }
  require(o, lo >= 0.2 && hi <= 3.0, "ball band [" + fmt("%.3g", lo) + ", " + fmt("%.3g", hi) + "]");

  std::vector<int> all{1, 2, 3, 4, 5, 6, 7, 8};
  const GrowthFit cube = growth_fit("cube", all, 1.0, derive_seed(run.seed, 710), 100000, run.par);
  double cmin = 1e9, cmax = 0.0, cmean = 0.0;
  Json crows = Json::array();
  for (const GrowthRow& r : cube.rows) {
    cmin = std::min(cmin, r.per_n);
    cmax = std::max(cmax, r.per_n);
    cmean += r.per_n / static_cast<double>(cube.rows.size());
    crows.push_back({{"n", r.n}, {"per_n", r.per_n}, {"stderr", r.stderr_}});
  }
  const double spread = (cmax - cmin) / cmean;
  require(o, spread <= 0.1, "cube spread " + fmt("%.3g", spread));
  fits["cube_L1_per_n"] = crows;

  const GrowthFit gauss = growth_fit("gaussian", all, 1.0, derive_seed(run.seed, 720), 100000, run.par);
  double gworst = 0.0;
  Json grows = Json::array();
  for (const GrowthRow& r : gauss.rows) {
    const double rel = std::abs(r.norm / (r.n / 2.0) - 1.0);
    gworst = std::max(gworst, rel);
    grows.push_back({{"n", r.n}, {"norm", r.norm}, {"relative_error", rel}});
  }
  require(o, gworst <= 0.02, "gaussian error " + fmt("%.3g", gworst));
  fits["gaussian_L1"] = grows;
  fits["ball_band"] = {lo, hi};
  fits["cube_spread"] = spread;
  o.artifact = fits;
  if (o.pass)
    o.detail = "ball band [" + fmt("%.2f", lo) + ", " + fmt("%.2f", hi) + "], cube spread " +
               fmt("%.3f", spread) + ", gaussian error " + fmt("%.4f", gworst);
  return o;
}

Outcome exponential_moments(const Run& run) {
  Outcome o;
  Json rows = Json::array();
  double worst_ratio = 0.0;
  for (int n = 2; n <= 6; ++n) {
    const double ceiling = 2.0 * std::exp(n * std::log(static_cast<double>(n)) / 16.0);
    for (const ZooEntry& z : isotropic_zoo(n)) {
      const MomentReport r = exp_moment(z.model, 1.0 / (16.0 * n),
                                        derive_seed(run.seed, 800 + n), 100000, run.par);
      const bool ok = !r.tail.divergent && r.estimate <= ceiling;
      worst_ratio = std::max(worst_ratio, r.estimate / ceiling);
      require(o, ok, z.label + " n=" + std::to_string(n));
      rows.push_back({{"model", z.label}, {"n", n}, {"estimate", num(r.estimate)},
                      {"stderr", num(r.stderr_)}, {"ceiling", ceiling},
                      {"tail_index", num(r.tail.tail_index)}, {"divergent", r.tail.divergent}});
    }
  }
  const MomentReport heavy = exp_moment(MeasureModel::isotropic_gaussian(2), 2.0,
                                        derive_seed(run.seed, 890), 100000, run.par);
  require(o, heavy.tail.divergent, "gaussian c/n = 2 not flagged");
  o.artifact = {{"rows", rows},
                {"gaussian_c_over_n_2", {{"tail_index", num(heavy.tail.tail_index)},
                                         {"divergent", heavy.tail.divergent}}}};
  if (o.pass) o.detail = "max estimate/ceiling " + fmt("%.3f", worst_ratio) + ", c/n = 2 flagged";
  return o;
}

Outcome depth_checks(const Run& run) {
  Outcome o;
  double worst_closed = 0.0, worst_sphere = 0.0;
  DepthOptions sphere;
  sphere.allow_closed_form = false;
  for (int n = 2; n <= 5; ++n) {
    const MeasureModel g = MeasureModel::isotropic_gaussian(n);
    RandomStream rng(run.seed, 900 + n);
    for (int i = 0; i < 200; ++i) {
      Vector x(n);
      for (int k = 0; k < n; ++k) x(k) = 1.5 * rng.normal();
      const double exact = gaussian_tail(x.norm());
      worst_closed = std::max(worst_closed, std::abs(depth(g, x).value - exact));
      if (i < 40) worst_sphere = std::max(worst_sphere, std::abs(depth(g, x, sphere).value - exact));
    }
  }
  require(o, worst_closed <= 1e-6, "closed-form error " + fmt("%.3g", worst_closed));
  require(o, worst_sphere <= 2e-3, "sphere-search error " + fmt("%.3g", worst_sphere));

  std::size_t points = 0, upper_fail = 0, lower_fail = 0;
  for (int n = 2; n <= 3; ++n)
    for (const ZooEntry& z : isotropic_zoo(n)) {
      const Matrix xs = z.model.sample(derive_seed(run.seed, 950 + n), 1000, run.par);
      const std::vector<DepthBoundsReport> reps = run.par.map<DepthBoundsReport>(
          static_cast<std::size_t>(xs.cols()), [&](std::size_t j) {
            return depth_cramer_bounds_check(z.model, xs.col(static_cast<Eigen::Index>(j)), 0.1);
          });
      for (const DepthBoundsReport& r : reps) {
        ++points;
        upper_fail += !r.upper_holds;
        lower_fail += !r.lower_holds;
      }
    }
  require(o, upper_fail == 0, std::to_string(upper_fail) + " upper-bound violations");
  require(o, lower_fail == 0, std::to_string(lower_fail) + " lower-bound violations");
  o.artifact = {{"max_closed_form_error", worst_closed},
                {"max_sphere_error", worst_sphere},
                {"bound_points", points},
                {"upper_violations", upper_fail},
                {"lower_violations", lower_fail}};
  if (o.pass)
    o.detail = "closed form " + fmt("%.2g", worst_closed) + ", sphere " + fmt("%.2g", worst_sphere) +
               ", " + std::to_string(points) + " bound points clean";
  return o;
}

Outcome negative_moments(const Run& run) {
  Outcome o;
  const MeasureModel g1 = MeasureModel::isotropic_gaussian(1);
  const NegativeMomentReport half = negative_moment(g1, 0.5, derive_seed(run.seed, 1000), 100000, run.par);
  const NegativeMomentReport heavy = negative_moment(g1, 1.5, derive_seed(run.seed, 1001), 100000, run.par);
  require(o, !half.tail.divergent, "J(0.5) flagged");
  require(o, std::isfinite(half.estimate), "J(0.5) not finite");
  require(o, heavy.tail.divergent, "J(1.5) not flagged");
  Json rows = Json::array();
  for (int n = 2; n <= 3; ++n)
    for (const ZooEntry& z : isotropic_zoo(n)) {
      const double p = 1.0 / (32.0 * n);
      const NegativeMomentReport r =
          negative_moment(z.model, p, derive_seed(run.seed, 1010 + n), 100000, run.par);
      require(o, !r.tail.divergent, z.label + " n=" + std::to_string(n) + " flagged");
      rows.push_back({{"model", z.label}, {"n", n}, {"p", p}, {"estimate", num(r.estimate)},
                      {"stderr", num(r.stderr_)}, {"tail_index", num(r.tail.tail_index)},
                      {"divergent", r.tail.divergent}});
    }
  o.artifact = {{"gaussian_1d",
                 {{"J_0.5", num(half.estimate)}, {"J_0.5_tail_index", num(half.tail.tail_index)},
                  {"J_1.5_tail_index", num(heavy.tail.tail_index)}, {"J_1.5_divergent", heavy.tail.divergent}}},
                {"rows", rows}};
  if (o.pass) o.detail = "J(0.5) = " + fmt("%.4f", half.estimate) + ", J(1.5) flagged, zoo clean";
  return o;
}

Outcome threshold(const Run& run) {
  Outcome o;
  Json rows = Json::array();
  std::vector<double> grid;
  for (int k = 1; k <= 9; ++k) grid.push_back(k);
  for (const ZooEntry& z : isotropic_zoo(2)) {
    if (z.label != "gaussian" && z.label != "cube") continue;
    try {
      const ThresholdReport r = threshold_scan(z.model, 0.25, grid, 40, 2000,
                                               derive_seed(run.seed, 1100), 100000, run.par);
      require(o, r.tau_inside, z.label + ": tau " + fmt("%.3f", r.tau) + " outside [" +
                                   fmt("%g", r.rho1) + ", " + fmt("%g", r.rho2) + "]");
      rows.push_back({{"model", z.label}, {"rho1", r.rho1}, {"rho2", r.rho2}, {"tau", r.tau},
                      {"tau_stderr", r.tau_stderr}, {"tau_inside", r.tau_inside}});
    } catch (const ThresholdRangeError& e) {
      require(o, false, z.label + ": " + e.what());
      rows.push_back({{"model", z.label}, {"error", e.what()}});
    }
  }
  const MeasureModel unit = MeasureModel::uniform_cube(1, 1.0);
  Json exact = Json::array();
  for (std::size_t N : {2u, 5u, 20u, 100u}) {
    const PolytopeMeasure m = expected_measure(unit, N, 4000, 100, derive_seed(run.seed, 1150), run.par);
    const double law = (N - 1.0) / (N + 1.0);
    const bool ok = std::abs(m.estimate - law) <= 3.0 * m.stderr_;
    require(o, ok, "unit interval N=" + std::to_string(N));
    exact.push_back({{"N", N}, {"estimate", m.estimate}, {"stderr", m.stderr_}, {"exact", law}});
  }
  o.artifact = {{"windows", rows}, {"unit_interval", exact}};
  if (o.pass) o.detail = "tau inside the window for gaussian and cube, interval law within 3 sigma";
  return o;
}

Outcome covering(const Run& run) {
  Outcome o;
  const MeasureModel g = MeasureModel::isotropic_gaussian(2);
  Json rows = Json::array();
  for (std::size_t N : {50u, 200u}) {
    const CoveringReport r = covering_bound_check(g, 1.5, N, 400, derive_seed(run.seed, 1200), 128, run.par);
    require(o, r.holds, "N=" + std::to_string(N));
    rows.push_back({{"N", N}, {"miss", 1.0 - r.contained}, {"stderr", r.stderr_},
                    {"bound", r.bound}, {"holds", r.holds}});
  }
  o.artifact = {{"rows", rows}};
  if (o.pass) o.detail = "P(T_s not in K_N) below the binomial bound for N = 50, 200";
  return o;
}

Outcome floating_limits(const Run& run) {
  Outcome o;
  const DiskAsaReport d = disk_asa_limit_check({2, 4, 6, 8, 10, 12, 14}, derive_seed(run.seed, 1300),
                                               20000, 0.1, run.par);
  require(o, d.within_tolerance, "disk limit " + fmt("%.4f", d.fit.limit) + " vs " + fmt("%.4f", d.target));
  require(o, d.sharpness_grows, "c = 4 rescaling does not grow");
  Json rows = Json::array();
  for (int n = 2; n <= 4; ++n)
    for (const ZooEntry& z : isotropic_zoo(n)) {
      const TMeasureReport r = t_measure_bound_check(z.model, {1, 2, 3, 4, 5, 6},
                                                     derive_seed(run.seed, 1310 + n), 5000, run.par);
      require(o, r.holds, z.label + " n=" + std::to_string(n));
      rows.push_back({{"model", z.label}, {"n", n}, {"bound", r.bound},
                      {"empirical_exponent", num(r.empirical_exponent)}, {"holds", r.holds}});
    }
  o.artifact = {{"disk", {{"limit", d.fit.limit}, {"target", d.target},
                          {"relative_error", d.relative_error}, {"sharp_rescaled", d.sharp_rescaled}}},
                {"t_measure", rows}};
  if (o.pass) o.detail = "disk limit " + fmt("%.4f", d.fit.limit) + " (target " +
                         fmt("%.4f", d.target) + "), T-measure bound holds";
  return o;
}

std::vector<Criterion> criteria() {
  return {
      {1, "gaussian exactness", 10, gaussian_exactness},
      {2, "one-dimensional oracles", 5, one_dimensional_oracles},
      {3, "duality", 0, duality},
      {4, "density level sets carry mass", 120, density_level_mass},
      {5, "inclusion suite", 600, inclusion_suite},
      {6, "dilation", 0, dilation},
      {7, "moment growth", 300, moment_growth},
      {8, "exponential moments", 0, exponential_moments},
      {9, "depth", 0, depth_checks},
      {10, "negative depth moments", 0, negative_moments},
      {11, "threshold window", 600, threshold},
      {12, "covering bound", 0, covering},
      {13, "floating bodies", 600, floating_limits},
  };
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream b;
  b << f.rdbuf();
  return b.str();
}

// Runs the selected criteria, writing criterion_<id>.json into `dir`.
std::vector<std::pair<Criterion, Outcome>> run_all(const std::set<int>& only, const Run& run,
                                                   const fs::path& dir, bool print) {
  fs::create_directories(dir);
  std::vector<std::pair<Criterion, Outcome>> results;
  for (const Criterion& c : criteria()) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run(run);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    Json doc = Json::object();
    doc["criterion"] = c.id;
    doc["title"] = c.title;
    doc["seed"] = run.seed;
    doc["pass"] = o.pass;
    doc["result"] = o.artifact;
    std::ofstream(dir / ("criterion_" + std::to_string(c.id) + ".json"), std::ios::binary)
        << doc.dump(2) << "\n";
    // wall time stays out of the artifact so reruns compare byte for byte
    if (c.budget_seconds > 0 && secs > c.budget_seconds)
      require(o, false, "runtime " + fmt("%.0f", secs) + " s over " + fmt("%.0f", c.budget_seconds) + " s");
    if (print) {
      std::printf("%s  %2d  %-30s %7.1fs  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title.c_str(), secs,
                  o.detail.c_str());
      std::fflush(stdout);
    }
    results.emplace_back(c, std::move(o));
  }
  return results;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance run"};
  std::string artifacts = "acceptance_artifacts";
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::vector<int> only;
  bool skip_rerun = false;
  app.add_option("--artifacts", artifacts, "artifact directory");
  app.add_option("--seed", seed, "seed");
  app.add_option("--threads", threads, "worker threads of the first run");
  app.add_option("--criteria", only, "run only these criteria")->delimiter(',');
  app.add_flag("--no-rerun", skip_rerun, "skip the determinism rerun");
  CLI11_PARSE(app, argc, argv);

  const std::set<int> selected(only.begin(), only.end());
  const fs::path root(artifacts);
  fs::remove_all(root);
  const auto first = run_all(selected, {seed, Parallel(threads)}, root / "run", true);
  bool all = std::all_of(first.begin(), first.end(), [](const auto& r) { return r.second.pass; });

  if (!skip_rerun && (selected.empty() || selected.count(14))) {
    const auto t0 = std::chrono::steady_clock::now();
    // same seed, different thread count
    run_all(selected, {seed, Parallel(threads + 1)}, root / "rerun", false);
    std::size_t files = 0, differing = 0;
    for (const auto& entry : fs::directory_iterator(root / "run")) {
      ++files;
      const fs::path other = root / "rerun" / entry.path().filename();
      if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) ++differing;
    }
    const bool pass = files > 0 && differing == 0;
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s  14  %-30s %7.1fs  %zu artifacts, %zu differ\n", pass ? "PASS" : "FAIL",
                "determinism", secs, files, differing);
    all = all && pass;
  }
  return all ? 0 : 1;
}
