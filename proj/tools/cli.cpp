#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cramer/errors.hpp"
#include "cramer/model_io.hpp"

namespace cli {

namespace fs = std::filesystem;

bool Context::has_model() const {
  return !model_arg.empty() || (config.contains("model") && !config["model"].is_null());
}

cramer::MeasureModel Context::model() const {
  if (!model_arg.empty()) {
    const auto first = model_arg.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && model_arg[first] == '{')
      return cramer::parse_model(model_arg);
    return cramer::load_model(model_arg);
  }
  if (config.contains("model") && config["model"].is_object())
    return cramer::parse_model(config["model"].dump());
  throw cramer::InputError("no model: pass --model or a config with a \"model\" object");
}

void Params::apply(const Json& config) const {
  for (const Entry& e : entries_) {
    if (!e.app->parsed() || e.option->count() > 0 || !config.contains(e.key)) continue;
    try {
      e.set(config[e.key]);
    } catch (const Json::exception& err) {
      throw cramer::InputError("config key \"" + e.key + "\": " + err.what());
    }
  }
}

void emit(const Context& ctx, const std::string& name, const Json& doc,
          const std::optional<std::string>& csv) {
  const std::string text = doc.dump(2) + "\n";
  std::cout << (csv ? *csv : text);
  if (ctx.out.empty()) return;
  std::error_code ec;
  fs::create_directories(ctx.out, ec);
  if (ec) throw cramer::InputError("cannot create output directory " + ctx.out);
  auto write = [&](const fs::path& path, const std::string& body) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw cramer::InputError("cannot write " + path.string());
    f << body;
  };
  write(fs::path(ctx.out) / (name + ".json"), text);
  if (csv) write(fs::path(ctx.out) / (name + ".csv"), *csv);
}

Json document(const std::string& command) {
  Json doc = Json::object();
  doc["schema"] = kSchema;
  doc["command"] = command;
  return doc;
}

Json to_json(const cramer::Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number(v(i)));
  return a;
}

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json statement(const std::string& label, std::optional<bool> pass, Json measured) {
  Json s = Json::object();
  s["label"] = label;
  s["pass"] = pass ? Json(*pass) : Json(nullptr);
  s["measured"] = std::move(measured);
  return s;
}

cramer::Vector parse_point(const std::string& text, int dimension) {
  std::string t = text;
  for (char& c : t)
    if (c == ',' || c == ';') c = ' ';
  std::istringstream in(t);
  std::vector<double> v;
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw cramer::InputError("not a number: \"" + tok + "\"");
    v.push_back(x);
  }
  if (static_cast<int>(v.size()) != dimension)
    throw cramer::InputError("point \"" + text + "\" has " + std::to_string(v.size()) +
                             " components, model dimension is " + std::to_string(dimension));
  return Eigen::Map<const cramer::Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<cramer::Vector> read_points(const std::string& path, int dimension) {
  std::ifstream f(path);
  if (!f) throw cramer::InputError("cannot read points file " + path);
  std::vector<cramer::Vector> out;
  std::string line;
  while (std::getline(f, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse_point(line, dimension));
  }
  return out;
}

}  // namespace cli
