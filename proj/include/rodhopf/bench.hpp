#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rodhopf/linear.hpp"
#include "rodhopf/params.hpp"
#include "rodhopf/sim.hpp"
#include "rodhopf/wnl.hpp"

namespace rodhopf::bench {

// Reads a JSON document; syntax errors carry line and column.
nlohmann::json load_json(const std::string& path);
nlohmann::json parse_json(const std::string& text, const std::string& origin);

// Either an explicit list or {"start", "stop", "step"}, stop included.
// Throws ValidationError on an empty, unsorted or malformed list.
std::vector<double> parse_forces(const nlohmann::json& j);

// Keys shared by all subcommands. Unknown keys are rejected.
struct BenchConfig {
  RodParams params = reference_params(0.0);
  std::vector<double> forces;
  nlohmann::json sim = nlohmann::json::object();  // SimConfig overrides, no "params"
  double window_max = 2.0;
  double noise_floor = 1e-4;
  double asymptotic_limit = 1.0;  // compare: rows with 0 < dF <= limit are graded
  int grid_n = 96;
  std::string landau_path, sweep_path;

  static BenchConfig from_json(const nlohmann::json& doc);
};

// Spectrum sweep: two leading transverse eigenvalues per force.
struct SpectrumRow {
  double force;
  cplx w1, w2;
};

struct SpectrumResult {
  std::vector<SpectrumRow> rows;
  std::optional<HopfPoint> hopf;  // empty when no threshold exists below 200
  std::string notice;
};

SpectrumResult spectrum_sweep(const RodParams& tmpl, const std::vector<double>& forces,
                              const Grid& grid, int jobs);
void write_spectrum_csv(const SpectrumResult& r, const std::string& path);
nlohmann::json spectrum_summary(const SpectrumResult& r, const RodParams& tmpl, int grid_n);

// The landau record. Fields that need supercriticality are null otherwise.
nlohmann::json landau_record(const LandauAnalysis& a, const HopfPoint& hp, int grid_n);

struct SweepSpec {
  RodParams params_template = reference_params(0.0);
  std::vector<double> forces;
  nlohmann::json sim_overrides = nlohmann::json::object();
  std::string out_dir;  // empty: no per-run files
  int grid_n = 96;
  double window_max = 2.0;
  double noise_floor = 1e-4;

  static SweepSpec from(const BenchConfig& c, const std::string& out_dir);
};

struct SweepRow {
  double force = 0.0;
  double delta = 0.0;  // force - force_crit
  RunStatus status = RunStatus::unsaturated;
  double amplitude = 0.0;
  double frequency = 0.0;
  std::string error;  // non-empty when the run failed
};

struct ScalingFit {
  bool empty = true;
  std::string notice;
  double force_crit = 0.0;
  double window_max = 2.0;
  double slope = 0.0;  // amplitude^2 = slope * dF through the origin
  double c_fit = 0.0;  // sqrt(slope)
  double exponent = 0.0;  // log amplitude against log dF
  double prefactor = 0.0;
  double slope_rms = 0.0;  // rms of amplitude^2 - slope dF
  double log_rms = 0.0;
  std::vector<double> used;
  std::vector<std::pair<double, std::string>> excluded;

  nlohmann::json to_json() const;
};

ScalingFit fit_scaling(const std::vector<SweepRow>& rows, double force_crit, double window_max,
                       double noise_floor);

struct SweepResult {
  HopfPoint hopf;
  std::vector<SweepRow> rows;
  ScalingFit fit;
};

// Runs are distributed over `jobs` threads and merged in input order.
SweepResult run_sweep(const SweepSpec& spec, int jobs);
void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path);
std::vector<SweepRow> read_sweep_csv(const std::string& path);
nlohmann::json sweep_fingerprint(const SweepSpec& spec, const HopfPoint& hp);

struct CompareRow {
  double force = 0.0, delta = 0.0;
  std::string status;
  double amplitude = 0.0, predicted_amplitude = 0.0, amplitude_error = 0.0;
  double frequency = 0.0, predicted_frequency = 0.0, frequency_error = 0.0;
  bool graded = false;
  bool pass = true;
  std::string note;
};

struct CompareReport {
  std::vector<CompareRow> rows;
  bool pass = true;
  int graded = 0;
};

// Predictions from the landau record; rows with 0 < dF <= asymptotic_limit
// need 10% amplitude and 5% frequency agreement.
CompareReport compare(const nlohmann::json& landau, const std::vector<SweepRow>& rows,
                      double asymptotic_limit = 1.0);

// Throws ValidationError listing the differing fields.
void check_fingerprints(const nlohmann::json& landau, const nlohmann::json& sweep_meta);

void write_compare_csv(const CompareReport& r, const std::string& path);
nlohmann::json compare_summary(const CompareReport& r);

// %.17g, the number format of every artifact.
std::string num(double v);
void write_json(const nlohmann::json& j, const std::string& path);

}  // namespace rodhopf::bench
