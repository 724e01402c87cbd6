#include <fstream>
#include <iostream>
#include <sstream>

#include "cli.hpp"
#include "cramer/errors.hpp"
#include "cramer/polytopes.hpp"

namespace {

using cli::Json;

int fail(int code, const std::string& kind, const std::string& message,
         const Json& partial = nullptr) {
  Json err = Json::object();
  err["schema"] = cli::kSchema;
  err["error"] = {{"kind", kind}, {"message", message}, {"exit_code", code}};
  if (!partial.is_null()) err["partial"] = partial;
  std::cerr << err.dump() << "\n";
  return code;
}

Json load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw cramer::InputError("cannot read config " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  Json config;
  try {
    config = Json::parse(buf.str());
  } catch (const Json::parse_error& e) {
    throw cramer::InputError("malformed config " + path + ": " + e.what());
  }
  if (!config.is_object()) throw cramer::InputError("config must be a JSON object");
  return config;
}

Json threshold_partial(const cramer::ThresholdReport& r) {
  Json grid = Json::array();
  for (const auto& p : r.grid)
    grid.push_back({{"log_n", p.log_n}, {"N", p.N}, {"estimate", p.estimate},
                    {"stderr", p.stderr_}, {"smoothed", p.smoothed}});
  return {{"delta", r.delta}, {"tau", r.tau}, {"tau_stderr", r.tau_stderr}, {"grid", grid}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cramer transform, convex bodies and half-space depth of log-concave measures"};
  app.require_subcommand(1);
  cli::Context ctx;
  std::string config_path;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  app.add_option("--config", config_path,
                 "JSON run config: model, seed, threads, out and any subcommand parameter");
  CLI::Option* seed_opt = app.add_option("--seed", seed, "64-bit seed (default 1)");
  CLI::Option* threads_opt = app.add_option(
      "--threads", threads, "worker threads (default: CRAMER_BODIES_THREADS, else 1)");
  CLI::Option* out_opt = app.add_option("--out", ctx.out, "also write artifacts to this directory");
  app.add_option("--model", ctx.model_arg,
                 "model descriptor: inline JSON or a file path "
                 "({\"kind\": ..., \"dimension\": n, \"params\": {...}})");
  app.footer("Exit codes: 0 ok, 2 input or config error, 3 numeric or range error.\n"
             "Errors are reported as JSON on stderr.");

  cli::Params params;
  const std::vector<cli::Command> commands = {
      cli::add_transform(app, ctx, params), cli::add_bodies(app, ctx, params),
      cli::add_inclusions(app, ctx, params), cli::add_moments(app, ctx, params),
      cli::add_depth(app, ctx, params),     cli::add_threshold(app, ctx, params),
      cli::add_floating(app, ctx, params),   cli::add_report(app, ctx, params)};

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(2, "input", e.what());
  }

  try {
    if (!config_path.empty()) ctx.config = load_config(config_path);
    const Json& cfg = ctx.config;
    try {
      if (seed_opt->count() == 0 && cfg.contains("seed")) seed = cfg["seed"].get<std::uint64_t>();
      if (threads_opt->count() == 0 && cfg.contains("threads"))
        threads = cfg["threads"].get<unsigned>();
      if (out_opt->count() == 0 && cfg.contains("out")) ctx.out = cfg["out"].get<std::string>();
    } catch (const Json::exception& e) {
      throw cramer::InputError(std::string("config: ") + e.what());
    }
    if (threads == 0) threads = cramer::threads_from_environment();
    ctx.seed = seed;
    ctx.threads = threads;
    ctx.par = cramer::Parallel(threads);
    params.apply(cfg);
    for (const cli::Command& c : commands)
      if (c.app->parsed()) c.run();
    return 0;
  } catch (const cramer::ThresholdRangeError& e) {
    return fail(3, "range", e.what(), threshold_partial(e.partial()));
  } catch (const cramer::InputError& e) {
    return fail(2, "input", e.what());
  } catch (const cramer::CapabilityError& e) {
    return fail(2, "capability", e.what());
  } catch (const cramer::RangeError& e) {
    return fail(3, "range", e.what());
  } catch (const cramer::NumericError& e) {
    return fail(3, "numeric", e.what());
  } catch (const std::exception& e) {
    return fail(1, "internal", e.what());
  }
}
