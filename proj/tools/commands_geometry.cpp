#include <charconv>
#include <cmath>

#include "cli.hpp"
#include "cramer/bodies.hpp"
#include "cramer/cramer.hpp"
#include "cramer/depth.hpp"
#include "cramer/directions.hpp"
#include "cramer/errors.hpp"
#include "cramer/inclusions.hpp"

namespace cli {

namespace {

std::string csv_number(double v) {
  if (!std::isfinite(v)) return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::vector<cramer::Vector> collect_points(const std::vector<std::string>& inline_points,
                                           const std::string& file, int n) {
  std::vector<cramer::Vector> pts;
  for (const std::string& p : inline_points) pts.push_back(parse_point(p, n));
  if (!file.empty())
    for (cramer::Vector& p : read_points(file, n)) pts.push_back(std::move(p));
  return pts;
}

// statement labels for the inclusion claims
std::string claim_label(const std::string& claim) {
  if (claim == "inclusions-Kp") return "eq:inclusions-Kp";
  if (claim == "r-3") return "prop:r-3";
  if (claim == "r-4") return "prop:r-4";
  if (claim == "floating-1") return "prop:floating-1";
  if (claim == "floating-2") return "lem:floating-2";
  if (claim == "level-B") return "lem:level-B";
  if (claim == "regularity") return "eq:regularity";
  return claim;
}

Json inclusion_json(const cramer::InclusionReport& r) {
  return {{"claim", r.claim},
          {"holds", r.holds()},
          {"directions", r.directions},
          {"worst_margin", number(r.worst_margin)},
          {"violations", r.violations},
          {"tol", r.tol},
          {"semantics", r.semantics}};
}

}  // namespace

Command add_transform(CLI::App& app, Context& ctx, Params& params) {
  auto* sub = app.add_subcommand("transform", "Lambda* (and Lambda) at a batch of points");
  struct Opts {
    std::vector<std::string> points, xi;
    std::string points_file, ray;
    std::vector<double> radii;
    double tol = 1e-8;
  };
  auto o = std::make_shared<Opts>();
  params.add(sub, "--point", o->points, "point, components separated by commas (repeatable)");
  params.add(sub, "--points-file", o->points_file, "file with one point per line");
  params.add(sub, "--ray", o->ray, "ray direction; evaluates at --radii along it");
  params.add(sub, "--radii", o->radii, "radii along --ray");
  params.add(sub, "--xi", o->xi, "also evaluate Lambda at these points (repeatable)");
  params.add(sub, "--tol", o->tol, "gradient tolerance of the Newton ascent");
  return {sub, [&ctx, o] {
            const cramer::MeasureModel model = ctx.model();
            const int n = model.dimension();
            std::vector<cramer::Vector> pts = collect_points(o->points, o->points_file, n);
            if (!o->ray.empty()) {
              const cramer::Vector dir = parse_point(o->ray, n);
              if (!(dir.norm() > 0.0)) throw cramer::InputError("--ray must be nonzero");
              if (o->radii.empty()) throw cramer::InputError("--ray needs --radii");
              for (double r : o->radii) pts.push_back(r * dir.normalized());
            }
            if (pts.empty() && o->xi.empty())
              throw cramer::InputError("transform: give --point, --points-file, --ray or --xi");
            cramer::LegendreOptions opts;
            opts.tol = o->tol;
            const auto results = ctx.par.map<cramer::LegendreResult>(
                pts.size(), [&](std::size_t i) { return cramer::cramer_transform(model, pts[i], opts); });
            Json doc = document("transform");
            doc["model"] = model.name();
            doc["dimension"] = n;
            Json rows = Json::array();
            for (std::size_t i = 0; i < pts.size(); ++i) {
              const cramer::LegendreResult& r = results[i];
              rows.push_back({{"x", to_json(pts[i])},
                              {"value", r.finite() ? number(r.value) : Json(nullptr)},
                              {"maximizer", r.maximizer ? to_json(*r.maximizer) : Json(nullptr)},
                              {"status", cramer::to_string(r.status)},
                              {"iterations", r.iterations},
                              {"gradient_residual", number(r.gradient_residual)}});
            }
            doc["results"] = rows;
            if (!o->xi.empty()) {
              Json lap = Json::array();
              for (const std::string& s : o->xi) {
                const cramer::Vector xi = parse_point(s, n);
                const cramer::LogLaplaceEval e = model.log_laplace(xi, cramer::LaplaceOrder::Value);
                lap.push_back({{"xi", to_json(xi)},
                               {"value", e.in_domain ? number(e.value) : Json(nullptr)},
                               {"in_domain", e.in_domain}});
              }
              doc["log_laplace"] = lap;
            }
            emit(ctx, "transform", doc);
          }};
}

Command add_bodies(CLI::App& app, Context& ctx, Params& params) {
  auto* sub = app.add_subcommand("bodies", "radial functions of B, R, K, Zplus or T bodies (CSV)");
  struct Opts {
    std::string family = "B", format = "csv";
    std::vector<double> t;
    std::size_t directions = 0, measure_samples = 0;
    std::vector<double> dilation;
  };
  auto o = std::make_shared<Opts>();
  params.add(sub, "--family", o->family, "B, R, K, Zplus or T");
  params.add(sub, "--t", o->t, "body parameters (t, or s for T)")->required();
  params.add(sub, "--directions", o->directions, "unit directions (default depends on n)");
  params.add(sub, "--measure-samples", o->measure_samples,
             "also estimate mu(body) from this many samples");
  params.add(sub, "--dilation", o->dilation,
             "also check mu((1+delta) body) <= e^{2n delta} mu(body) for these delta");
  params.add(sub, "--format", o->format, "stdout format: csv or json");
  return {sub, [&ctx, o] {
            const cramer::MeasureModel model = ctx.model();
            const int n = model.dimension();
            const cramer::Family family = cramer::parse_family(o->family);
            if (o->format != "csv" && o->format != "json")
              throw cramer::InputError("--format must be csv or json");
            const std::size_t count =
                o->directions ? o->directions : cramer::default_direction_count(n);
            const std::vector<cramer::Vector> dirs = cramer::sphere_directions(n, count);

            std::string csv = "# schema: " + std::string(kSchema) + "\nfamily,t,dir_index";
            for (int k = 0; k < n; ++k) csv += ",theta_" + std::to_string(k);
            csv += ",value\n";
            Json doc = document("bodies");
            doc["model"] = model.name();
            doc["dimension"] = n;
            doc["family"] = cramer::to_string(family);
            doc["directions"] = dirs.size();
            Json profiles = Json::array(), measures = Json::array(), dilations = Json::array(),
                 statements = Json::array();
            for (double t : o->t) {
              const cramer::BodySpec spec{family, t};
              const cramer::RadialProfile prof = cramer::radial_profile(model, spec, dirs, ctx.par);
              double lo = INFINITY, hi = 0.0;
              for (std::size_t i = 0; i < dirs.size(); ++i) {
                csv += cramer::to_string(family) + "," + csv_number(t) + "," + std::to_string(i);
                for (int k = 0; k < n; ++k) csv += "," + csv_number(dirs[i](k));
                csv += "," + csv_number(prof.values[i]) + "\n";
                lo = std::min(lo, prof.values[i]);
                hi = std::max(hi, prof.values[i]);
              }
              profiles.push_back({{"t", t}, {"min_radial", number(lo)}, {"max_radial", number(hi)}});
              if (o->measure_samples > 0) {
                const cramer::MeasureEstimate m =
                    cramer::body_measure(model, spec, ctx.seed, o->measure_samples, ctx.par);
                measures.push_back({{"t", t},
                                    {"estimate", m.estimate},
                                    {"stderr", m.stderr_},
                                    {"samples", m.samples}});
                if (family == cramer::Family::R) {
                  const double bound = 1.0 - std::exp(-t / 4.0);
                  Json meas = {{"t", t}, {"estimate", m.estimate}, {"stderr", m.stderr_},
                               {"bound", bound}};
                  const bool in_range = t >= 5.0 * (n - 1);
                  statements.push_back(statement(
                      "prop:r-2",
                      in_range ? std::optional<bool>(m.estimate >= bound - 3.0 * m.stderr_)
                               : std::nullopt,
                      meas));
                  const double referee = 1.0 - std::pow(2.0, n) * std::exp(-t / 2.0);
                  statements.push_back(
                      statement("rem:referee", m.estimate >= referee - 3.0 * m.stderr_,
                                {{"t", t}, {"estimate", m.estimate}, {"bound", referee}}));
                }
              }
              for (double delta : o->dilation) {
                const std::size_t samples = o->measure_samples ? o->measure_samples : 100000;
                const cramer::DilationReport d = cramer::dilation_measure_check(
                    model, spec, delta, ctx.seed, samples, ctx.par);
                Json row = {{"t", t},          {"delta", delta},     {"dilated", d.dilated},
                            {"base", d.base},  {"factor", d.factor}, {"stderr", d.stderr_},
                            {"holds", d.holds}};
                dilations.push_back(row);
                statements.push_back(statement("lem:2", d.holds, row));
              }
            }
            doc["profiles"] = profiles;
            if (!measures.empty()) doc["measures"] = measures;
            if (!dilations.empty()) doc["dilations"] = dilations;
            doc["statements"] = statements;
            if (o->format == "json") emit(ctx, "bodies", doc);
            else emit(ctx, "bodies", doc, csv);
          }};
}

Command add_inclusions(CLI::App& app, Context& ctx, Params& params) {
  auto* sub = app.add_subcommand("inclusions", "check the body inclusion claims by radial comparison");
  struct Opts {
    std::string claim = "all";
    std::size_t directions = 0;
    double tol = 1e-6;
  };
  auto o = std::make_shared<Opts>();
  std::string names;
  for (const std::string& c : cramer::claim_names()) names += (names.empty() ? "" : ", ") + c;
  params.add(sub, "--claim", o->claim, "claim name or all: " + names);
  params.add(sub, "--directions", o->directions, "unit directions (default depends on n)");
  params.add(sub, "--tol", o->tol, "relative slack on radial comparisons");
  return {sub, [&ctx, o] {
            const cramer::MeasureModel model = ctx.model();
            const int n = model.dimension();
            const std::size_t count =
                o->directions ? o->directions : cramer::default_direction_count(n);
            const std::vector<cramer::Vector> dirs = cramer::sphere_directions(n, count);
            std::vector<std::string> claims;
            if (o->claim == "all") claims = cramer::claim_names();
            else claims.push_back(o->claim);
            Json doc = document("inclusions");
            doc["model"] = model.name();
            doc["dimension"] = n;
            doc["directions"] = dirs.size();
            Json rows = Json::array(), statements = Json::array();
            bool all = true;
            for (const std::string& c : claims) {
              const cramer::ClaimOutcome out = cramer::check_claim(c, model, dirs, o->tol, ctx.par);
              Json reports = Json::array(), diagnostics = Json::array(), measured = Json::object();
              for (const auto& r : out.reports) reports.push_back(inclusion_json(r));
              for (const auto& r : out.diagnostics) diagnostics.push_back(inclusion_json(r));
              for (const auto& [k, v] : out.measured) measured[k] = number(v);
              rows.push_back({{"claim", out.claim},
                              {"label", claim_label(out.claim)},
                              {"statement", out.statement},
                              {"holds", out.holds()},
                              {"measured", measured},
                              {"reports", reports},
                              {"diagnostics", diagnostics}});
              statements.push_back(statement(claim_label(out.claim), out.holds(), measured));
              all = all && out.holds();
            }
            doc["claims"] = rows;
            doc["all_hold"] = all;
            doc["statements"] = statements;
            emit(ctx, "inclusions", doc);
          }};
}

Command add_depth(CLI::App& app, Context& ctx, Params& params) {
  auto* sub = app.add_subcommand("depth", "half-space depth at points, negative moments, mean depth");
  struct Opts {
    std::vector<std::string> points;
    std::string points_file;
    std::vector<double> epsilon, negative_moment;
    bool mean = false;
    std::size_t samples = 100000;
  };
  auto o = std::make_shared<Opts>();
  params.add(sub, "--point", o->points, "point, components separated by commas (repeatable)");
  params.add(sub, "--points-file", o->points_file, "file with one point per line");
  params.add(sub, "--epsilon", o->epsilon,
             "check exp(-Lambda*) >= phi and Lambda* >= ln(eps/(2 phi)^{1-eps}) at each point");
  params.add(sub, "--negative-moment", o->negative_moment, "estimate E phi(X)^{-p} for these p");
  params.add(sub, "--mean", o->mean, "estimate E phi(X)");
  params.add(sub, "--samples", o->samples, "Monte-Carlo samples");
  return {sub, [&ctx, o] {
            const cramer::MeasureModel model = ctx.model();
            const int n = model.dimension();
            const std::vector<cramer::Vector> pts = collect_points(o->points, o->points_file, n);
            if (pts.empty() && o->negative_moment.empty() && !o->mean)
              throw cramer::InputError("depth: nothing to do (give points, --negative-moment or --mean)");
            Json doc = document("depth");
            doc["model"] = model.name();
            doc["dimension"] = n;
            const auto results = ctx.par.map<cramer::DepthResult>(
                pts.size(), [&](std::size_t i) { return cramer::depth(model, pts[i]); });
            Json rows = Json::array(), statements = Json::array();
            for (std::size_t i = 0; i < pts.size(); ++i) {
              const cramer::DepthResult& r = results[i];
              Json row = {{"x", to_json(pts[i])},
                          {"value", r.value},
                          {"method", cramer::to_string(r.method)},
                          {"direction", r.minimizing_direction.size() ? to_json(r.minimizing_direction)
                                                                      : Json(nullptr)},
                          {"evaluations", r.evaluations}};
              Json bounds = Json::array();
              for (double eps : o->epsilon) {
                const cramer::DepthBoundsReport b = cramer::depth_cramer_bounds_check(model, pts[i], eps);
                bounds.push_back({{"epsilon", eps},
                                  {"cramer", number(b.cramer)},
                                  {"upper", b.upper},
                                  {"lower", number(b.lower)},
                                  {"upper_holds", b.upper_holds},
                                  {"lower_holds", b.lower_holds}});
                const Json where = {{"x", to_json(pts[i])}, {"epsilon", eps}};
                statements.push_back(statement("eq:floating-1", b.upper_holds, where));
                statements.push_back(statement("prop:floating-1", b.lower_holds, where));
              }
              if (!o->epsilon.empty()) row["bounds"] = bounds;
              rows.push_back(row);
            }
            doc["results"] = rows;
            if (!o->negative_moment.empty()) {
              Json moms = Json::array();
              for (double p : o->negative_moment) {
                const cramer::NegativeMomentReport m =
                    cramer::negative_moment(model, p, ctx.seed, o->samples, ctx.par);
                Json row = {{"p", p},
                            {"estimate", number(m.estimate)},
                            {"stderr", number(m.stderr_)},
                            {"tail_index", number(m.tail.tail_index)},
                            {"divergent", m.tail.divergent},
                            {"samples", m.samples}};
                moms.push_back(row);
                // finiteness is asserted for p <= 1/(32 n); larger p is reported only
                const bool asserted = p <= 1.0 / (32.0 * n);
                statements.push_back(statement(
                    "th:negative-phi", asserted ? std::optional<bool>(!m.tail.divergent) : std::nullopt,
                    row));
              }
              doc["negative_moments"] = moms;
            }
            if (o->mean) {
              const cramer::MeanEstimate m = cramer::depth_mean(model, ctx.seed, o->samples, ctx.par);
              doc["mean"] = {{"estimate", m.estimate}, {"stderr", m.stderr_}, {"samples", o->samples}};
            }
            doc["statements"] = statements;
            emit(ctx, "depth", doc);
          }};
}

}  // namespace cli
