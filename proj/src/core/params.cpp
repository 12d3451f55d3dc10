#include "rodhopf/params.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "rodhopf/errors.hpp"

namespace rodhopf {

namespace {

void require_positive(const char* name, double value) {
  if (!(std::isfinite(value) && value > 0.0)) {
    std::ostringstream msg;
    msg << name << " must be positive and finite, got " << value;
    throw ValidationError(msg.str());
  }
}

}  // namespace

RodParams make_params(double k1_tilde, double k2_tilde, double gamma1_tilde,
                      double gamma3_tilde, double force_tilde) {
  require_positive("k1_tilde", k1_tilde);
  require_positive("k2_tilde", k2_tilde);
  require_positive("gamma1_tilde", gamma1_tilde);
  require_positive("gamma3_tilde", gamma3_tilde);
  if (!std::isfinite(force_tilde)) throw ValidationError("force_tilde must be finite");
  return RodParams(k1_tilde, k2_tilde, gamma1_tilde, gamma3_tilde, force_tilde);
}

RodParams isotropic_params(double kappa, double gamma1_tilde, double gamma3_tilde,
                           double force_tilde) {
  return make_params(kappa, kappa, gamma1_tilde, gamma3_tilde, force_tilde);
}

RodParams reference_params(double force_tilde) {
  return isotropic_params(1e4, 0.5, 1e-4, force_tilde);
}

RodParams RodParams::with_force(double force) const {
  return make_params(k1_, k2_, gamma1_, gamma3_, force);
}

nlohmann::json RodParams::to_json() const {
  return {{"k1_tilde", k1_},
          {"k2_tilde", k2_},
          {"gamma1_tilde", gamma1_},
          {"gamma3_tilde", gamma3_},
          {"force_tilde", force_}};
}

RodParams RodParams::from_json(const nlohmann::json& doc) {
  static const std::set<std::string> keys = {"k1_tilde", "k2_tilde", "gamma1_tilde",
                                             "gamma3_tilde", "force_tilde"};
  if (!doc.is_object()) throw ValidationError("params: expected a JSON object");
  for (const auto& item : doc.items()) {
    if (!keys.count(item.key())) throw ValidationError("params: unknown key '" + item.key() + "'");
  }
  auto get = [&](const std::string& key, bool required, double fallback) {
    if (!doc.contains(key)) {
      if (required) throw ValidationError("params: missing key '" + key + "'");
      return fallback;
    }
    const auto& v = doc.at(key);
    if (!v.is_number()) throw ValidationError("params: key '" + key + "' must be a number");
    return v.get<double>();
  };
  return make_params(get("k1_tilde", true, 0), get("k2_tilde", true, 0),
                     get("gamma1_tilde", true, 0), get("gamma3_tilde", true, 0),
                     get("force_tilde", false, 0.0));
}

}  // namespace rodhopf
