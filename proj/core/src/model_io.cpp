#include "cramer/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cramer/errors.hpp"

namespace cramer {

namespace {

using nlohmann::json;

double number(const json& params, const char* key, double fallback) {
  if (!params.contains(key)) return fallback;
  const json& v = params.at(key);
  if (!v.is_number()) throw InputError(std::string("params.") + key + " must be a number");
  return v.get<double>();
}

Factor parse_factor(const json& j) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
    throw InputError("each factor needs a string \"type\"");
  const std::string type = j.at("type").get<std::string>();
  if (type == "uniform") return Factor::uniform(number(j, "width", 1.0));
  if (type == "exponential") return Factor::exponential(number(j, "rate", 1.0));
  if (type == "gaussian") return Factor::gaussian(number(j, "sigma", 1.0));
  throw InputError("unknown factor type: " + type);
}

MeasureModel parse(const json& j) {
  if (!j.is_object()) throw InputError("model descriptor must be an object");
  if (!j.contains("kind") || !j.at("kind").is_string())
    throw InputError("model descriptor needs a string \"kind\"");
  if (!j.contains("dimension") || !j.at("dimension").is_number_integer())
    throw InputError("model descriptor needs an integer \"dimension\"");
  const std::string kind = j.at("kind").get<std::string>();
  const int n = j.at("dimension").get<int>();
  if (n < 1) throw InputError("dimension must be positive");
  const json params = j.contains("params") ? j.at("params") : json::object();
  if (!params.is_object()) throw InputError("\"params\" must be an object");

  if (kind == "IsotropicGaussian") return MeasureModel::isotropic_gaussian(n);
  if (kind == "UniformBall") {
    if (params.value("volume_one", false)) return MeasureModel::volume_one_ball(n);
    return MeasureModel::uniform_ball(n, number(params, "radius", 1.0));
  }
  if (kind == "UniformCube") return MeasureModel::uniform_cube(n, number(params, "side", 1.0));
  if (kind == "ProductExponentialCentered") return MeasureModel::product_exponential(n);
  if (kind == "ProductFactors") {
    if (!params.contains("factors") || !params.at("factors").is_array())
      throw InputError("ProductFactors needs params.factors");
    std::vector<Factor> factors;
    for (const auto& f : params.at("factors")) factors.push_back(parse_factor(f));
    if (static_cast<int>(factors.size()) != n)
      throw InputError("ProductFactors: factor count does not match dimension");
    return MeasureModel::product(std::move(factors));
  }
  if (kind == "AffinePushforward") {
    if (!params.contains("base")) throw InputError("AffinePushforward needs params.base");
    const MeasureModel base = parse(params.at("base"));
    if (base.dimension() != n) throw InputError("AffinePushforward: base dimension mismatch");
    if (params.value("isotropize", false)) return isotropize(base).model;
    if (!params.contains("matrix") || !params.at("matrix").is_array())
      throw InputError("AffinePushforward needs params.matrix or params.isotropize");
    const json& rows = params.at("matrix");
    if (static_cast<int>(rows.size()) != n) throw InputError("matrix must be n x n");
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) {
      const json& row = rows.at(static_cast<std::size_t>(i));
      if (!row.is_array() || static_cast<int>(row.size()) != n)
        throw InputError("matrix must be n x n");
      for (int k = 0; k < n; ++k) {
        const json& v = row.at(static_cast<std::size_t>(k));
        if (!v.is_number()) throw InputError("matrix entries must be numbers");
        m(i, k) = v.get<double>();
      }
    }
    Vector b = Vector::Zero(n);
    if (params.contains("shift")) {
      const json& s = params.at("shift");
      if (!s.is_array() || static_cast<int>(s.size()) != n)
        throw InputError("shift must have length n");
      for (int i = 0; i < n; ++i) b[i] = s.at(static_cast<std::size_t>(i)).get<double>();
    }
    return MeasureModel::pushforward(base, AffineMap(m, b));
  }
  throw InputError("unknown model kind: " + kind);
}

}  // namespace

MeasureModel parse_model(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed model JSON: ") + e.what());
  }
  try {
    return parse(j);
  } catch (const json::exception& e) {
    throw InputError(std::string("bad model descriptor: ") + e.what());
  }
}

MeasureModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open model file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

}  // namespace cramer
