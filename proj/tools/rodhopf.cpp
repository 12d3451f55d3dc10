// rodhopf: spectrum | landau | sweep | compare
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rodhopf/bench.hpp"
#include "rodhopf/errors.hpp"

using namespace rodhopf;
using namespace rodhopf::bench;

namespace {

struct Globals {
  std::string config;
  std::string out = ".";
  int jobs = 1;
  int grid_n = 0;
};

BenchConfig load(const Globals& g) {
  BenchConfig c = g.config.empty() ? BenchConfig{} : BenchConfig::from_json(load_json(g.config));
  if (g.grid_n != 0) {
    if (g.grid_n < 8) throw ValidationError("--grid-n must be at least 8");
    c.grid_n = g.grid_n;
  }
  if (g.jobs < 1) throw ValidationError("--jobs must be at least 1");
  std::filesystem::create_directories(g.out);
  return c;
}

std::string path(const Globals& g, const std::string& name) { return g.out + "/" + name; }

int cmd_spectrum(const Globals& g) {
  BenchConfig c = load(g);
  if (c.forces.empty()) c.forces = parse_forces({{"start", 0.0}, {"stop", 60.0}, {"step", 0.5}});
  const Grid grid(c.grid_n);
  const SpectrumResult r = spectrum_sweep(c.params, c.forces, grid, g.jobs);
  write_spectrum_csv(r, path(g, "spectrum.csv"));
  const auto summary = spectrum_summary(r, c.params, c.grid_n);
  write_json(summary, path(g, "spectrum_summary.json"));
  if (r.hopf) {
    std::printf("force_star %.10f\nforce_crit %.10f\nomega_c    %.10f\n", r.hopf->force_star,
                r.hopf->force_crit, r.hopf->omega_c);
  } else {
    std::printf("no threshold located: %s\n", r.notice.c_str());
  }
  return 0;
}

int cmd_landau(const Globals& g) {
  const BenchConfig c = load(g);
  const Grid grid(c.grid_n);
  const LandauAnalysis a = analyse(c.params, grid);
  const auto rec = landau_record(a, a.hopf, c.grid_n);
  write_json(rec, path(g, "landau.json"));
  std::cout << rec.dump(2) << '\n';
  return 0;
}

int cmd_sweep(const Globals& g) {
  BenchConfig c = load(g);
  if (c.forces.empty()) c.forces = {38.0, 38.4, 38.8, 39.2, 39.6, 40.0};
  const SweepSpec spec = SweepSpec::from(c, g.out);
  const SweepResult r = run_sweep(spec, g.jobs);
  write_sweep_csv(r.rows, path(g, "sweep.csv"));
  nlohmann::json fit = r.fit.to_json();
  fit["meta"] = sweep_fingerprint(spec, r.hopf);
  write_json(fit, path(g, "fit.json"));
  for (const auto& row : r.rows)
    std::printf("F %-10.6g dF %-10.6g %-12s amplitude %.6f frequency %.4f%s%s\n", row.force, row.delta,
                to_string(row.status).c_str(), row.amplitude, row.frequency, row.error.empty() ? "" : "  ",
                row.error.c_str());
  if (r.fit.empty) {
    std::printf("fit: %s\n", r.fit.notice.c_str());
  } else {
    std::printf("fit: C_fit %.6f exponent %.4f over %zu points\n", r.fit.c_fit, r.fit.exponent,
                r.fit.used.size());
  }
  return 0;
}

int cmd_compare(const Globals& g, std::string landau_path, std::string sweep_path) {
  const BenchConfig c = load(g);
  if (landau_path.empty()) landau_path = c.landau_path;
  if (sweep_path.empty()) sweep_path = c.sweep_path;
  if (landau_path.empty() || sweep_path.empty())
    throw ValidationError("compare: needs a landau record and a sweep csv (--landau, --sweep)");
  const auto landau = load_json(landau_path);
  const auto meta_path = std::filesystem::path(sweep_path).parent_path() / "fit.json";
  if (!std::filesystem::exists(meta_path))
    throw ValidationError("compare: no fit.json next to " + sweep_path);
  const auto fit = load_json(meta_path.string());
  if (!fit.contains("meta")) throw ValidationError("compare: " + meta_path.string() + " has no 'meta' block");
  check_fingerprints(landau, fit.at("meta"));
  const CompareReport rep = compare(landau, read_sweep_csv(sweep_path), c.asymptotic_limit);
  write_compare_csv(rep, path(g, "compare.csv"));
  write_json(compare_summary(rep), path(g, "compare.json"));
  std::printf("%10s %8s %12s %10s %10s %8s %10s %10s %8s  %s\n", "force", "dF", "status", "amp", "pred",
              "err", "freq", "pred", "err", "note");
  for (const auto& row : rep.rows)
    std::printf("%10.4f %8.4f %12s %10.6f %10.6f %8.4f %10.4f %10.4f %8.4f  %s\n", row.force, row.delta,
                row.status.c_str(), row.amplitude, row.predicted_amplitude, row.amplitude_error,
                row.frequency, row.predicted_frequency, row.frequency_error, row.note.c_str());
  std::printf("%s: %d graded rows\n", rep.pass ? "PASS" : "FAIL", rep.graded);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hopf threshold, Landau coefficients and limit cycles of a rod under a follower force"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "JSON configuration")->check(CLI::ExistingFile);
  app.add_option("--out", g.out, "output directory");
  app.add_option("--jobs", g.jobs, "worker threads");
  app.add_option("--grid-n", g.grid_n, "Chebyshev points, overrides the config");
  app.fallthrough();

  auto* spectrum = app.add_subcommand("spectrum", "leading eigenvalues over a force range");
  auto* landau = app.add_subcommand("landau", "threshold and Landau coefficients");
  auto* sweep = app.add_subcommand("sweep", "nonlinear runs and the square-root fit");
  auto* cmp = app.add_subcommand("compare", "simulated against predicted limit cycles");
  std::string landau_path, sweep_path;
  cmp->add_option("--landau", landau_path, "landau.json");
  cmp->add_option("--sweep", sweep_path, "sweep.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*spectrum) return cmd_spectrum(g);
    if (*landau) return cmd_landau(g);
    if (*sweep) return cmd_sweep(g);
    if (*cmp) return cmd_compare(g, landau_path, sweep_path);
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "computation failed: %s\n", e.what());
    return 1;
  }
  return 2;
}
