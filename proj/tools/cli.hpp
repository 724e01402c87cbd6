#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cramer/measures.hpp"
#include "cramer/parallel.hpp"

namespace cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "1";

/// Settings shared by every subcommand, merged from --config and the flags.
struct Context {
  Json config = Json::object();
  std::string model_arg;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string out;
  cramer::Parallel par;

  /// The model from --model (descriptor text or file) or the config's "model".
  cramer::MeasureModel model() const;
  bool has_model() const;
};

/// Subcommand parameters that may also come from the config file under the
/// same name (dashes become underscores). Flags win.
class Params {
 public:
  template <class T>
  CLI::Option* add(CLI::App* app, const std::string& flag, T& target, const std::string& help) {
    CLI::Option* opt = app->add_option(flag, target, help);
    // numeric lists accept "1,2,3"; string lists (points) keep their commas
    if constexpr (requires { typename T::value_type; } && !std::is_same_v<T, std::string>) {
      if constexpr (std::is_arithmetic_v<typename T::value_type>) opt->delimiter(',');
    }
    std::string key = flag.substr(flag.find_first_not_of('-'));
    for (char& c : key)
      if (c == '-') c = '_';
    entries_.push_back({app, opt, key, [&target](const Json& v) { v.get_to(target); }});
    return opt;
  }

  /// Fills the parameters of the selected subcommand that were not given on
  /// the command line from `config`.
  void apply(const Json& config) const;

 private:
  struct Entry {
    CLI::App* app;
    CLI::Option* option;
    std::string key;
    std::function<void(const Json&)> set;
  };
  std::vector<Entry> entries_;
};

/// Writes `doc` to stdout, and to <out>/<name>.json when --out is set. A CSV
/// body, when given, replaces the JSON on stdout and is written next to it.
void emit(const Context& ctx, const std::string& name, const Json& doc,
          const std::optional<std::string>& csv = std::nullopt);

Json document(const std::string& command);
Json to_json(const cramer::Vector& v);
/// Non-finite values become null.
Json number(double v);
/// One statement entry for `report`.
Json statement(const std::string& label, std::optional<bool> pass, Json measured);

/// Points from a file with one point per line, components separated by commas
/// or whitespace; '#' starts a comment.
std::vector<cramer::Vector> read_points(const std::string& path, int dimension);
cramer::Vector parse_point(const std::string& text, int dimension);

struct Command {
  CLI::App* app;
  std::function<void()> run;
};

Command add_transform(CLI::App& app, Context& ctx, Params& params);
Command add_bodies(CLI::App& app, Context& ctx, Params& params);
Command add_inclusions(CLI::App& app, Context& ctx, Params& params);
Command add_moments(CLI::App& app, Context& ctx, Params& params);
Command add_depth(CLI::App& app, Context& ctx, Params& params);
Command add_threshold(CLI::App& app, Context& ctx, Params& params);
Command add_floating(CLI::App& app, Context& ctx, Params& params);
Command add_report(CLI::App& app, Context& ctx, Params& params);

}  // namespace cli
