#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rodhopf/bench.hpp"
#include "rodhopf/errors.hpp"
#include "parallel.hpp"

namespace rodhopf::bench {

namespace {

RunStatus parse_status(const std::string& s) {
  if (s == "saturated") return RunStatus::saturated;
  if (s == "decayed") return RunStatus::decayed;
  if (s == "unsaturated" || s == "failed") return RunStatus::unsaturated;
  throw ValidationError("sweep csv: unknown status '" + s + "'");
}

std::string run_stem(const std::string& dir, int i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "/runs/run_%03d", i);
  return dir + buf;
}

}  // namespace

SweepSpec SweepSpec::from(const BenchConfig& c, const std::string& out_dir) {
  if (c.forces.empty()) throw ValidationError("sweep: config needs a non-empty 'forces' entry");
  SweepSpec s;
  s.params_template = c.params;
  s.forces = c.forces;
  s.sim_overrides = c.sim;
  s.out_dir = out_dir;
  s.grid_n = c.grid_n;
  s.window_max = c.window_max;
  s.noise_floor = c.noise_floor;
  return s;
}

nlohmann::json ScalingFit::to_json() const {
  nlohmann::json ex = nlohmann::json::array();
  for (const auto& [f, why] : excluded) ex.push_back({{"force_tilde", f}, {"reason", why}});
  nlohmann::json j = {{"force_crit", force_crit},
                      {"window", {0.0, window_max}},
                      {"used", used},
                      {"excluded", ex}};
  if (empty) {
    j["empty"] = true;
    j["notice"] = notice;
    return j;
  }
  j["empty"] = false;
  j["slope"] = slope;
  j["C_fit"] = c_fit;
  j["slope_rms"] = slope_rms;
  if (used.size() >= 2) {
    j["exponent"] = exponent;
    j["prefactor"] = prefactor;
    j["log_rms"] = log_rms;
  } else {
    j["exponent"] = nullptr;
    j["prefactor"] = nullptr;
    j["log_rms"] = nullptr;
  }
  return j;
}

ScalingFit fit_scaling(const std::vector<SweepRow>& rows, double force_crit, double window_max,
                       double noise_floor) {
  ScalingFit fit;
  fit.force_crit = force_crit;
  fit.window_max = window_max;
  std::vector<double> d, a;
  for (const auto& r : rows) {
    const double df = r.force - force_crit;
    if (!(df > 0.0)) {
      fit.excluded.emplace_back(r.force, "below threshold");
    } else if (df > window_max) {
      fit.excluded.emplace_back(r.force, "outside fit window");
    } else if (r.status != RunStatus::saturated || !r.error.empty()) {
      fit.excluded.emplace_back(r.force, r.error.empty() ? "not saturated (" + to_string(r.status) + ")"
                                                         : "run failed: " + r.error);
    } else {
      fit.used.push_back(r.force);
      d.push_back(df);
      a.push_back(r.amplitude);
    }
  }
  if (d.empty()) {
    fit.notice = "no supercritical points";
    return fit;
  }
  fit.empty = false;

  double sda = 0.0, sdd = 0.0;
  for (size_t i = 0; i < d.size(); ++i) {
    sda += d[i] * a[i] * a[i];
    sdd += d[i] * d[i];
  }
  fit.slope = sda / sdd;
  fit.c_fit = std::sqrt(fit.slope);
  double ss = 0.0;
  for (size_t i = 0; i < d.size(); ++i) ss += std::pow(a[i] * a[i] - fit.slope * d[i], 2);
  fit.slope_rms = std::sqrt(ss / static_cast<double>(d.size()));

  std::vector<double> lx, ly;
  for (size_t i = 0; i < d.size(); ++i) {
    if (a[i] < noise_floor) continue;
    lx.push_back(std::log(d[i]));
    ly.push_back(std::log(a[i]));
  }
  if (lx.size() >= 2) {
    const double n = static_cast<double>(lx.size());
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < lx.size(); ++i) mx += lx[i] / n, my += ly[i] / n;
    double sxy = 0.0, sxx = 0.0;
    for (size_t i = 0; i < lx.size(); ++i) {
      sxy += (lx[i] - mx) * (ly[i] - my);
      sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    if (sxx > 0.0) {
      fit.exponent = sxy / sxx;
      fit.prefactor = std::exp(my - fit.exponent * mx);
      double r2 = 0.0;
      for (size_t i = 0; i < lx.size(); ++i) r2 += std::pow(ly[i] - my - fit.exponent * (lx[i] - mx), 2);
      fit.log_rms = std::sqrt(r2 / n);
    }
  }
  return fit;
}

nlohmann::json sweep_fingerprint(const SweepSpec& spec, const HopfPoint& hp) {
  return {{"params", spec.params_template.with_force(0.0).to_json()},
          {"grid_n", spec.grid_n},
          {"force_star", hp.force_star},
          {"force_crit", hp.force_crit},
          {"omega_c", hp.omega_c}};
}

SweepResult run_sweep(const SweepSpec& spec, int jobs) {
  if (spec.forces.empty()) throw ValidationError("sweep: empty force list");
  for (size_t i = 1; i < spec.forces.size(); ++i)
    if (!(spec.forces[i] > spec.forces[i - 1])) throw ValidationError("sweep: forces must be ascending");

  SimConfig base = SimConfig::from_json(spec.sim_overrides);
  base.grid_n = spec.grid_n;

  const Grid grid(spec.grid_n);
  SweepResult out;
  out.hopf = find_hopf_threshold(spec.params_template, grid);
  // the frequency scale of every run, so that t_max and dt do not depend on
  // the order in which threads search the threshold
  if (base.omega_estimate <= 0.0) base.omega_estimate = out.hopf.omega_c;

  if (!spec.out_dir.empty()) std::filesystem::create_directories(spec.out_dir + "/runs");
  out.rows.resize(spec.forces.size());
  parallel_for(static_cast<int>(spec.forces.size()), jobs, [&](int i) {
    SimConfig cfg = base;
    cfg.params = spec.params_template.with_force(spec.forces[i]);
    SweepRow& row = out.rows[i];
    row.force = spec.forces[i];
    row.delta = row.force - out.hopf.force_crit;
    try {
      const SimRecord rec = run(cfg);
      row.status = rec.status;
      row.amplitude = rec.amplitude;
      row.frequency = rec.frequency;
      if (!spec.out_dir.empty()) {
        const std::string stem = run_stem(spec.out_dir, i);
        write_tip_csv(rec, stem + "_tip.csv");
        write_json(sidecar(cfg, rec), stem + ".json");
      }
    } catch (const ComputationError& e) {
      row.status = RunStatus::unsaturated;
      row.error = e.what();
    }
  });
  out.fit = fit_scaling(out.rows, out.hopf.force_crit, spec.window_max, spec.noise_floor);
  return out;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  out << "force_tilde,delta_force,status,amplitude,frequency\n";
  for (const auto& r : rows)
    out << num(r.force) << ',' << num(r.delta) << ',' << (r.error.empty() ? to_string(r.status) : "failed")
        << ',' << num(r.amplitude) << ',' << num(r.frequency) << '\n';
}

std::vector<SweepRow> read_sweep_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read " + path);
  std::string line;
  if (!std::getline(in, line) || line != "force_tilde,delta_force,status,amplitude,frequency")
    throw ValidationError(path + ":1: unexpected header");
  std::vector<SweepRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string f[5];
    for (auto& s : f) std::getline(ss, s, ',');
    try {
      SweepRow r;
      r.force = std::stod(f[0]);
      r.delta = std::stod(f[1]);
      r.status = parse_status(f[2]);
      if (f[2] == "failed") r.error = "failed";
      r.amplitude = std::stod(f[3]);
      r.frequency = std::stod(f[4]);
      rows.push_back(r);
    } catch (const std::exception&) {
      throw ValidationError(path + ":" + std::to_string(lineno) + ": malformed row");
    }
  }
  return rows;
}

}  // namespace rodhopf::bench
