#include <cmath>
#include <deque>
#include <numbers>
#include <random>
#include <sstream>

#include "rodhopf/errors.hpp"
#include "rodhopf/linear.hpp"
#include "rodhopf/sim.hpp"

namespace rodhopf {

namespace {

struct Start {
  ResolvedConfig resolved;
  Configuration state;
};

// Frequency scale and initial shape from the linear problem.
Start prepare(const SimConfig& cfg) {
  if (cfg.grid_n < 8) throw ValidationError("grid_n must be at least 8");
  if (!(cfg.perturbation > 0.0 && cfg.perturbation <= 0.1))
    throw ValidationError("perturbation must lie in (0, 0.1]");
  if (cfg.dt < 0.0 || cfg.t_max < 0.0) throw ValidationError("dt and t_max must be positive");
  if (cfg.steps_per_period < 8) throw ValidationError("steps_per_period must be at least 8");
  if (cfg.jitter < 0.0 || cfg.jitter >= 1.0) throw ValidationError("jitter must lie in [0, 1)");
  if (cfg.jitter > 0.0 && !cfg.seed) throw ValidationError("jitter requires a seed");
  if (cfg.sample_every < 1 || cfg.snapshot_every < 0) throw ValidationError("bad sampling interval");
  if (cfg.saturation_periods < 1 || !(cfg.saturation_drift > 0.0))
    throw ValidationError("bad saturation thresholds");

  const Grid grid(cfg.grid_n);
  const RodParams& p = cfg.params;
  const int n = grid.size();
  Start s;
  s.state = base_state(p, grid);

  std::optional<CriticalMode> mode;
  double omega = cfg.omega_estimate;
  if (cfg.shape == InitialShape::critical_mode || omega <= 0.0) {
    try {
      const HopfPoint hp = find_hopf_threshold(p, grid);
      if (omega <= 0.0) omega = hp.omega_c;
      if (cfg.shape == InitialShape::critical_mode)
        mode = critical_mode(assemble_operator(p.with_force(hp.force_crit), grid), hp.omega_c);
    } catch (const BracketError&) {
      if (omega <= 0.0) {
        const auto w = leading_eigenvalues(assemble_operator(p, grid), 1, false);
        omega = std::max(std::fabs(w[0].imag()), std::fabs(w[0].real()));
      }
    }
  }
  if (!(omega > 0.0)) throw ValidationError("could not determine a frequency scale");

  double delta = cfg.perturbation;
  if (cfg.jitter > 0.0) {
    std::mt19937_64 rng(*cfg.seed);
    delta *= 1.0 + cfg.jitter * (2.0 * std::generate_canonical<double, 53>(rng) - 1.0);
  }
  if (mode) {
    s.state.y = delta * mode->Y.real();
    s.state.theta = delta * mode->Theta.real();
  } else {
    const double h = std::numbers::pi / 2.0;
    for (int i = 0; i < n; ++i) {
      const double u = grid.nodes()(i);
      s.state.y(i) = delta * (1.0 - std::cos(h * u));
      s.state.theta(i) = delta * h / p.nu() * std::sin(h * u);
    }
  }

  const double period = 2.0 * std::numbers::pi / omega;
  s.resolved.omega = omega;
  s.resolved.dt = cfg.dt > 0.0 ? cfg.dt : period / cfg.steps_per_period;
  s.resolved.t_max = cfg.t_max > 0.0 ? cfg.t_max : 400.0 * period;
  if (!(s.resolved.t_max > 100.0 * period)) {
    std::ostringstream msg;
    msg << "t_max = " << s.resolved.t_max << " must exceed 100 periods (" << 100.0 * period << ")";
    throw ValidationError(msg.str());
  }
  return s;
}

}  // namespace

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::saturated:
      return "saturated";
    case RunStatus::decayed:
      return "decayed";
    default:
      return "unsaturated";
  }
}

ResolvedConfig resolve(const SimConfig& cfg) { return prepare(cfg).resolved; }

SimRecord run(const SimConfig& cfg) {
  const Start start = prepare(cfg);
  const Grid grid(cfg.grid_n);
  Integrator integ(cfg.params, grid);
  const RodModel& model = integ.model();
  Eigen::VectorXd z = model.pack(start.state);
  model.make_consistent(z);

  const double dt = start.resolved.dt, t_max = start.resolved.t_max;
  const double period = 2.0 * std::numbers::pi / start.resolved.omega;
  SimRecord rec;
  rec.dt = dt;
  rec.t_max = t_max;
  rec.omega_estimate = start.resolved.omega;
  rec.initial_tip = model.tip_y(z);

  // last three tip samples of every step, for on-line extremum detection
  double tp[3] = {0, 0, 0}, yp[3] = {0, 0, 0};
  int have = 0;
  Extrema ext;
  std::deque<std::pair<double, double>> window;  // (t, |y|) over one period
  const double floor = cfg.decay_floor * std::fabs(rec.initial_tip);
  double t = 0.0, t_stop = t_max, h = dt;
  long k = 0;
  int samples = 0;

  auto record = [&](double time) {
    rec.times.push_back(time);
    rec.tip_x.push_back(model.tip_x(z));
    rec.tip_y.push_back(model.tip_y(z));
    if (cfg.snapshot_every > 0 && samples % cfg.snapshot_every == 0)
      rec.snapshots.push_back({time, model.unpack(z)});
    ++samples;
  };
  record(0.0);

  while (t < t_stop - 1e-12 * t_stop) {
    if (cfg.adaptive) {
      const double target = std::min(h, t_stop - t);
      const auto r = integ.adaptive_step(z, target, cfg.rtol, cfg.rtol * std::max(1e-3, std::fabs(rec.initial_tip)));
      t += r.taken;
      h = r.suggested;
    } else {
      integ.step(z, dt);
      t = static_cast<double>(++k) * dt;
    }
    const double y = model.tip_y(z);
    if (!std::isfinite(y)) throw StiffnessError("non-finite tip position");
    if (cfg.adaptive || k % cfg.sample_every == 0) record(t);

    tp[0] = tp[1], yp[0] = yp[1];
    tp[1] = tp[2], yp[1] = yp[2];
    tp[2] = t, yp[2] = y;
    if (have < 3) ++have;
    if (have == 3) {
      const std::vector<double> ts(tp, tp + 3), ys(yp, yp + 3);
      const Extrema e = find_extrema(ts, ys);
      if (!e.minima.empty()) ext.minima.push_back(e.minima[0]);
      if (!e.maxima.empty()) {
        ext.maxima.push_back(e.maxima[0]);
        rec.peak_amplitudes = cycle_amplitudes(ext);
        if (rec.status != RunStatus::saturated &&
            saturated(rec.peak_amplitudes, cfg.saturation_drift, cfg.saturation_periods)) {
          rec.status = RunStatus::saturated;
          t_stop = std::min(t_max, t * (1.0 + cfg.settle_fraction));
        }
      }
    }

    window.emplace_back(t, std::fabs(y));
    while (!window.empty() && window.front().first < t - period) window.pop_front();
    if (rec.status != RunStatus::saturated && t > period) {
      double peak = 0.0;
      for (const auto& w : window) peak = std::max(peak, w.second);
      if (peak < floor) {
        rec.status = RunStatus::decayed;
        break;
      }
    }
  }
  if (rec.times.back() != t) record(t);

  rec.saturated = rec.status == RunStatus::saturated;
  if (rec.saturated) {
    const CycleEstimate c = extract_cycle(rec);
    rec.amplitude = c.amplitude;
    rec.frequency = c.frequency;
  }
  rec.stats = integ.stats();
  return rec;
}

}  // namespace rodhopf
