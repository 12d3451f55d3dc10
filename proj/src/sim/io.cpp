#include <cstdio>
#include <fstream>
#include <set>

#include "rodhopf/errors.hpp"
#include "rodhopf/sim.hpp"

namespace rodhopf {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v + 0.0);
  return buf;
}

std::ofstream open(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  return out;
}

}  // namespace

nlohmann::json SimConfig::to_json() const {
  nlohmann::json j = {{"params", params.to_json()},
                      {"grid_n", grid_n},
                      {"dt", dt},
                      {"steps_per_period", steps_per_period},
                      {"t_max", t_max},
                      {"perturbation", perturbation},
                      {"shape", shape == InitialShape::critical_mode ? "critical_mode" : "bump"},
                      {"jitter", jitter},
                      {"omega_estimate", omega_estimate},
                      {"saturation_drift", saturation_drift},
                      {"saturation_periods", saturation_periods},
                      {"settle_fraction", settle_fraction},
                      {"decay_floor", decay_floor},
                      {"sample_every", sample_every},
                      {"snapshot_every", snapshot_every},
                      {"adaptive", adaptive},
                      {"rtol", rtol}};
  j["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
  return j;
}

SimConfig SimConfig::from_json(const nlohmann::json& doc) {
  static const std::set<std::string> keys = {
      "params",           "grid_n",      "dt",           "steps_per_period", "t_max",
      "perturbation",     "shape",       "jitter",       "seed",             "omega_estimate",
      "saturation_drift", "saturation_periods", "settle_fraction", "decay_floor", "sample_every",
      "snapshot_every",   "adaptive",    "rtol"};
  if (!doc.is_object()) throw ValidationError("sim config: expected a JSON object");
  for (const auto& item : doc.items())
    if (!keys.count(item.key())) throw ValidationError("sim config: unknown key '" + item.key() + "'");
  SimConfig c;
  try {
    if (doc.contains("params")) c.params = RodParams::from_json(doc.at("params"));
    auto get = [&](const char* key, auto& field) {
      if (doc.contains(key)) field = doc.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("grid_n", c.grid_n);
    get("dt", c.dt);
    get("steps_per_period", c.steps_per_period);
    get("t_max", c.t_max);
    get("perturbation", c.perturbation);
    get("jitter", c.jitter);
    get("omega_estimate", c.omega_estimate);
    get("saturation_drift", c.saturation_drift);
    get("saturation_periods", c.saturation_periods);
    get("settle_fraction", c.settle_fraction);
    get("decay_floor", c.decay_floor);
    get("sample_every", c.sample_every);
    get("snapshot_every", c.snapshot_every);
    get("adaptive", c.adaptive);
    get("rtol", c.rtol);
    if (doc.contains("seed") && !doc.at("seed").is_null()) c.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("shape")) {
      const std::string s = doc.at("shape").get<std::string>();
      if (s == "critical_mode") {
        c.shape = InitialShape::critical_mode;
      } else if (s == "bump") {
        c.shape = InitialShape::bump;
      } else {
        throw ValidationError("sim config: shape must be 'critical_mode' or 'bump'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("sim config: ") + e.what());
  }
  return c;
}

void write_tip_csv(const SimRecord& rec, const std::string& path) {
  auto out = open(path);
  out << "t,x_tip,y_tip\n";
  for (size_t k = 0; k < rec.times.size(); ++k)
    out << num(rec.times[k]) << ',' << num(rec.tip_x[k]) << ',' << num(rec.tip_y[k]) << '\n';
}

void write_snapshots_csv(const SimRecord& rec, const Grid& grid, const std::string& path) {
  auto out = open(path);
  out << "t,u,x,y,theta\n";
  for (const auto& s : rec.snapshots)
    for (int i = 0; i < grid.size(); ++i)
      out << num(s.t) << ',' << num(grid.nodes()(i)) << ',' << num(s.state.x(i)) << ','
          << num(s.state.y(i)) << ',' << num(s.state.theta(i)) << '\n';
}

nlohmann::json sidecar(const SimConfig& cfg, const SimRecord& rec) {
  return {{"config", cfg.to_json()},
          {"resolved", {{"dt", rec.dt}, {"t_max", rec.t_max}, {"omega_estimate", rec.omega_estimate}}},
          {"status", to_string(rec.status)},
          {"saturated", rec.saturated},
          {"amplitude", rec.amplitude},
          {"frequency", rec.frequency},
          {"t_end", rec.times.empty() ? 0.0 : rec.times.back()},
          {"initial_tip", rec.initial_tip},
          {"peaks", rec.peak_amplitudes.size()},
          {"steps", rec.stats.steps},
          {"newton_iterations", rec.stats.newton_iterations},
          {"jacobians", rec.stats.jacobians},
          {"factorizations", rec.stats.factorizations}};
}

}  // namespace rodhopf
