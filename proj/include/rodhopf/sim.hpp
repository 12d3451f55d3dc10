#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "rodhopf/configuration.hpp"
#include "rodhopf/grid.hpp"
#include "rodhopf/params.hpp"

namespace rodhopf {

// Nodal time derivatives and the three free-end residuals
// (F1(1) + F, F2(1), M(1)).
struct TimeDerivative {
  Eigen::VectorXd x, y, theta;
  Eigen::Vector3d boundary;
};

TimeDerivative rhs(const Configuration& c, const RodParams& p, const Grid& grid);

// The discretised rod as a semi-explicit DAE M z' = R(z). z stacks the
// values at nodes 1..n-1 of (x - nu u, y, theta); the rows of node n-1 are
// the algebraic free-end conditions, all others are differential.
class RodModel {
 public:
  RodModel(const RodParams& p, const Grid& grid);

  const RodParams& params() const { return params_; }
  const Grid& grid() const { return grid_; }
  int size() const { return 3 * (grid_.size() - 1); }
  int nodes() const { return grid_.size() - 1; }
  const Eigen::VectorXd& mass() const { return mass_; }

  Eigen::VectorXd pack(const Configuration& c) const;
  Configuration unpack(const Eigen::VectorXd& z) const;

  Eigen::VectorXd residual(const Eigen::VectorXd& z) const;
  Eigen::VectorXcd residual(const Eigen::VectorXcd& z) const;
  TimeDerivative derivative(const Eigen::VectorXd& z) const;
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& z) const;

  double tip_x(const Eigen::VectorXd& z) const { return params_.nu() + z(nodes() - 1); }
  double tip_y(const Eigen::VectorXd& z) const { return z(2 * nodes() - 1); }

  // Newton solve of the algebraic rows for the boundary values.
  void make_consistent(Eigen::VectorXd& z) const;

 private:
  template <class V>
  void evaluate(const V& z, V* packed, TimeDerivative* full) const;

  RodParams params_;
  Grid grid_;
  Eigen::VectorXd mass_;
  Eigen::MatrixXd d1c_;  // diff1 without the clamped column
  Eigen::MatrixXd d2c_;  // diff1 * diff1 without the clamped column
};

enum class JacobianPolicy {
  refreshed,    // recomputed whenever Newton contracts poorly
  frozen_base,  // the base-state linearisation, never updated
};

struct StepOptions {
  double newton_rtol = 1e-9;
  double newton_atol = 1e-15;
  int max_newton = 12;
  JacobianPolicy policy = JacobianPolicy::refreshed;
};

struct StepStats {
  long steps = 0;
  long rejected = 0;
  long newton_iterations = 0;
  long jacobians = 0;
  long factorizations = 0;
};

// L-stable, stiffly accurate two-stage SDIRK of order 2 with simplified
// Newton iterations.
class Integrator {
 public:
  Integrator(const RodParams& p, const Grid& grid, StepOptions opt = {});

  const RodModel& model() const { return model_; }
  const StepStats& stats() const { return stats_; }

  // Throws StiffnessError when Newton fails with a fresh Jacobian.
  void step(Eigen::VectorXd& z, double h);

  struct Adaptive {
    double taken;      // accepted step size
    double suggested;  // next step size
    double error;      // scaled error estimate of the accepted step
  };
  // Step doubling with error control in the max norm scaled by
  // atol + rtol |z|. Throws StiffnessError when h drops below 1e-12.
  Adaptive adaptive_step(Eigen::VectorXd& z, double h, double rtol, double atol);

 private:
  bool try_step(Eigen::VectorXd& z, double h);
  bool solve_stage(Eigen::VectorXd& y, const Eigen::VectorXd& offset, double hg);
  void refresh(const Eigen::VectorXd& z, double hg);
  void factor(double hg);

  RodModel model_;
  StepOptions opt_;
  StepStats stats_;
  Eigen::MatrixXd jac_;
  bool have_jac_ = false;
  bool jac_stale_ = false;
  double lu_hg_ = -1.0;
  Eigen::VectorXd slope_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

// One step of size dt from a configuration.
Configuration step(const Configuration& state, double dt, const RodParams& p, const Grid& grid);

enum class InitialShape { critical_mode, bump };

struct SimConfig {
  RodParams params = reference_params(40.0);
  int grid_n = 96;
  double dt = 0.0;              // 0: period / steps_per_period
  int steps_per_period = 128;
  double t_max = 0.0;           // 0: 400 periods
  double perturbation = 1e-3;
  InitialShape shape = InitialShape::critical_mode;
  double jitter = 0.0;          // relative random change of the perturbation
  std::optional<std::uint64_t> seed;  // required when jitter > 0
  double omega_estimate = 0.0;  // 0: from the linear spectrum
  double saturation_drift = 1e-3;
  int saturation_periods = 5;
  double settle_fraction = 0.25;  // run on for this fraction of the elapsed time
  double decay_floor = 1e-6;
  int sample_every = 1;           // record every k-th step
  int snapshot_every = 0;         // store a configuration every k samples; 0: none
  bool adaptive = false;
  double rtol = 1e-7;

  nlohmann::json to_json() const;
  static SimConfig from_json(const nlohmann::json& doc);
};

enum class RunStatus { saturated, decayed, unsaturated };

std::string to_string(RunStatus s);

struct Snapshot {
  double t;
  Configuration state;
};

struct SimRecord {
  std::vector<double> times, tip_x, tip_y;
  bool saturated = false;
  RunStatus status = RunStatus::unsaturated;
  double amplitude = 0.0;
  double frequency = 0.0;
  double dt = 0.0;
  double t_max = 0.0;
  double omega_estimate = 0.0;
  double initial_tip = 0.0;
  std::vector<double> peak_amplitudes;
  std::vector<Snapshot> snapshots;
  StepStats stats;
};

// Resolved step size, horizon and frequency estimate; throws ValidationError.
struct ResolvedConfig {
  double dt, t_max, omega;
};
ResolvedConfig resolve(const SimConfig& cfg);

SimRecord run(const SimConfig& cfg);

struct CycleEstimate {
  double amplitude = 0.0;
  double frequency = 0.0;
  int peaks = 0;
};

// Half peak-to-peak and 2 pi / mean up-crossing interval over the final
// window_fraction of the series. Throws InsufficientDataError with fewer
// than 5 peaks in the window.
CycleEstimate extract_cycle(const std::vector<double>& t, const std::vector<double>& y,
                            double window_fraction = 0.2);
CycleEstimate extract_cycle(const SimRecord& rec);

// Interpolated local maxima and minima, as (time, value).
struct Extrema {
  std::vector<std::pair<double, double>> maxima, minima;
};
Extrema find_extrema(const std::vector<double>& t, const std::vector<double>& y);

// True when the last `periods` relative changes of the half peak-to-peak
// amplitude all fall below `drift`.
bool saturated(const std::vector<double>& peak_amplitudes, double drift, int periods);
// Half peak-to-peak per cycle, pairing each maximum with the preceding minimum.
std::vector<double> cycle_amplitudes(const Extrema& e);

void write_tip_csv(const SimRecord& rec, const std::string& path);
void write_snapshots_csv(const SimRecord& rec, const Grid& grid, const std::string& path);
nlohmann::json sidecar(const SimConfig& cfg, const SimRecord& rec);

}  // namespace rodhopf
