#include "expfunc/model_config.hpp"

#include <cmath>
#include <set>

#include <json.hpp>

namespace expfunc {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("unknown key \"" + it.key() + "\" in " + where);
}

double number_at(const json& obj, const std::string& key, double fallback,
                 bool required = false) {
  if (!obj.contains(key)) {
    if (required) throw ConfigError("missing key \"" + key + "\"");
    return fallback;
  }
  if (!obj[key].is_number())
    throw ConfigError("key \"" + key + "\" must be a number");
  return obj[key].get<double>();
}

MeasureSpec parse_measure(const std::string& model, const json& params) {
  if (model == "stable") {
    reject_unknown(params, {"c", "alpha"}, "params");
    StableJumps s;
    s.c = number_at(params, "c", 1.0);
    s.alpha = number_at(params, "alpha", 0.5, true);
    return s;
  }
  if (model == "gamma_sub") {
    reject_unknown(params, {"a", "b"}, "params");
    GammaJumps g;
    g.a = number_at(params, "a", 1.0);
    g.b = number_at(params, "b", 1.0);
    return g;
  }
  if (model == "pure_kill") {
    reject_unknown(params, {}, "params");
    return NoJumps{};
  }
  if (model == "exp_jump_cpp") {
    reject_unknown(params, {"rate", "scale"}, "params");
    ExpJumps e;
    e.rate = number_at(params, "rate", 1.0);
    e.scale = number_at(params, "scale", 1.0);
    return e;
  }
  if (model == "cpp_atoms") {
    reject_unknown(params, {"atoms"}, "params");
    if (!params.contains("atoms") || !params["atoms"].is_array())
      throw ConfigError("cpp_atoms needs an \"atoms\" array");
    AtomJumps a;
    for (const auto& pair : params["atoms"]) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
          !pair[1].is_number())
        throw ConfigError("each atom must be a [location, mass] pair");
      a.atoms.push_back({pair[0].get<double>(), pair[1].get<double>()});
    }
    return a;
  }
  if (model == "custom_density") {
    reject_unknown(params, {"family", "rate", "mass"}, "params");
    if (!params.contains("family") || !params["family"].is_string())
      throw ConfigError("custom_density needs a \"family\" string");
    const std::string family = params["family"].get<std::string>();
    if (family == "exp") {
      // m(y) = mass * rate * e^{-rate y}: same law as exp_jump_cpp but
      // evaluated through the quadrature path (consistency fixture).
      const double rate = number_at(params, "rate", 1.0);
      const double mass = number_at(params, "mass", 1.0);
      if (!(rate > 0.0) || !(mass > 0.0))
        throw ConfigError("exp family needs rate > 0, mass > 0");
      DensityJumps d;
      d.density = [rate, mass](double y) {
        return mass * rate * std::exp(-rate * y);
      };
      d.tail = [rate, mass](double y) { return mass * std::exp(-rate * y); };
      d.small_integral = [rate, mass](double x) {
        return mass * (1.0 - std::exp(-rate * x)) / rate;
      };
      d.reg_var_index = 0.0;
      d.mass0 = mass;
      return d;
    }
    if (family == "index1_rv") {
      // Tail 1/(y ln^2(e^2/y)) on (0,1): regularly varying of index 1
      // at 0, the canonical positive-increase failure case, kept
      // integrable by the slowly varying correction.
      reject_unknown(params, {"family"}, "params");
      DensityJumps d;
      d.tail = [](double y) {
        if (y >= 1.0 || y <= 0.0) return 0.0;
        const double L = 2.0 - std::log(y);
        return 1.0 / (y * L * L);
      };
      d.density = [](double y) {
        if (y >= 1.0 || y <= 0.0) return 0.0;
        const double L = 2.0 - std::log(y);
        // -(d/dy) tail, ignoring the atom at 1 carried by the tail jump.
        return (L - 2.0) / (y * y * L * L * L);
      };
      d.small_integral = [](double x) {
        if (x >= 1.0) return 0.5 + 0.0 * x;
        return 1.0 / (2.0 - std::log(x));
      };
      d.reg_var_index = 1.0;
      return d;
    }
    throw ConfigError("unknown custom_density family \"" + family + "\"");
  }
  throw ConfigError("unknown model \"" + model + "\"");
}

json parse_document(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(doc, {"model", "params", "q", "d"}, "config");
  if (!doc.contains("model") || !doc["model"].is_string())
    throw ConfigError("config needs a \"model\" string");
  return doc;
}

}  // namespace

BernsteinSpec spec_from_json(const std::string& json_text) {
  const json doc = parse_document(json_text);
  const json params =
      doc.contains("params") ? doc["params"] : json::object();
  if (!params.is_object()) throw ConfigError("\"params\" must be an object");
  const double q = number_at(doc, "q", 0.0);
  const double d = number_at(doc, "d", 0.0);
  try {
    return BernsteinSpec(q, d,
                         parse_measure(doc["model"].get<std::string>(), params));
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid model parameters: ") + e.what());
  }
}

std::string canonical_config_json(const std::string& json_text) {
  const json doc = parse_document(json_text);
  json out;
  out["model"] = doc["model"];
  out["params"] = doc.contains("params") ? doc["params"] : json::object();
  out["q"] = number_at(doc, "q", 0.0);
  out["d"] = number_at(doc, "d", 0.0);
  return out.dump();
}

}  // namespace expfunc
