#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "rodhopf/bench.hpp"
#include "rodhopf/errors.hpp"

namespace rodhopf::bench {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v + 0.0);
  return buf;
}

void write_json(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  out << j.dump(2) << '\n';
}

nlohmann::json parse_json(const std::string& text, const std::string& origin) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // e.byte is one past the offending character
    int line = 1, col = 1;
    const size_t stop = std::min<size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream msg;
    msg << origin << ":" << line << ":" << col << ": " << e.what();
    throw ValidationError(msg.str());
  }
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path);
}

std::vector<double> parse_forces(const nlohmann::json& j) {
  std::vector<double> out;
  if (j.is_array()) {
    for (const auto& v : j) {
      if (!v.is_number()) throw ValidationError("forces: entries must be numbers");
      out.push_back(v.get<double>());
    }
  } else if (j.is_object()) {
    for (const auto& item : j.items())
      if (item.key() != "start" && item.key() != "stop" && item.key() != "step")
        throw ValidationError("forces: unknown key '" + item.key() + "'");
    for (const char* k : {"start", "stop", "step"})
      if (!j.contains(k) || !j.at(k).is_number())
        throw ValidationError(std::string("forces: missing numeric key '") + k + "'");
    const double a = j.at("start").get<double>(), b = j.at("stop").get<double>(),
                 s = j.at("step").get<double>();
    if (!(s > 0.0)) throw ValidationError("forces: step must be positive");
    // integer counting keeps the grid free of accumulated round-off
    const long count = static_cast<long>(std::floor((b - a) / s + 1e-9));
    for (long i = 0; i <= count; ++i) out.push_back(a + static_cast<double>(i) * s);
  } else {
    throw ValidationError("forces: expected a list or {start, stop, step}");
  }
  if (out.empty()) throw ValidationError("forces: empty force list");
  for (size_t i = 0; i < out.size(); ++i) {
    if (!std::isfinite(out[i])) throw ValidationError("forces: non-finite value");
    if (i > 0 && !(out[i] > out[i - 1])) throw ValidationError("forces: values must be strictly ascending");
  }
  return out;
}

BenchConfig BenchConfig::from_json(const nlohmann::json& doc) {
  static const std::set<std::string> keys = {"params", "forces", "sim", "fit", "grid_n",
                                             "landau", "sweep",  "compare"};
  if (!doc.is_object()) throw ValidationError("config: expected a JSON object");
  for (const auto& item : doc.items())
    if (!keys.count(item.key())) throw ValidationError("config: unknown key '" + item.key() + "'");

  BenchConfig c;
  try {
    if (doc.contains("params")) c.params = RodParams::from_json(doc.at("params"));
    if (doc.contains("forces")) c.forces = parse_forces(doc.at("forces"));
    if (doc.contains("grid_n")) c.grid_n = doc.at("grid_n").get<int>();
    if (doc.contains("sim")) {
      c.sim = doc.at("sim");
      if (!c.sim.is_object()) throw ValidationError("config: 'sim' must be an object");
      if (c.sim.contains("params")) throw ValidationError("config: set parameters in 'params', not 'sim.params'");
      SimConfig::from_json(c.sim);  // key check only
    }
    if (doc.contains("fit")) {
      const auto& f = doc.at("fit");
      for (const auto& item : f.items())
        if (item.key() != "window_max" && item.key() != "noise_floor")
          throw ValidationError("config: unknown key 'fit." + item.key() + "'");
      if (f.contains("window_max")) c.window_max = f.at("window_max").get<double>();
      if (f.contains("noise_floor")) c.noise_floor = f.at("noise_floor").get<double>();
    }
    if (doc.contains("compare")) {
      const auto& f = doc.at("compare");
      for (const auto& item : f.items())
        if (item.key() != "asymptotic_limit")
          throw ValidationError("config: unknown key 'compare." + item.key() + "'");
      if (f.contains("asymptotic_limit")) c.asymptotic_limit = f.at("asymptotic_limit").get<double>();
    }
    if (doc.contains("landau")) c.landau_path = doc.at("landau").get<std::string>();
    if (doc.contains("sweep")) c.sweep_path = doc.at("sweep").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  if (c.grid_n < 8) throw ValidationError("config: grid_n must be at least 8");
  if (!(c.window_max > 0.0)) throw ValidationError("config: fit.window_max must be positive");
  if (!(c.noise_floor >= 0.0)) throw ValidationError("config: fit.noise_floor must be non-negative");
  if (!(c.asymptotic_limit > 0.0)) throw ValidationError("config: compare.asymptotic_limit must be positive");
  return c;
}

}  // namespace rodhopf::bench
