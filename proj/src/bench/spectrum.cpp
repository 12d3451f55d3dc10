#include <cmath>
#include <fstream>

#include "rodhopf/bench.hpp"
#include "rodhopf/errors.hpp"
#include "parallel.hpp"

namespace rodhopf::bench {

SpectrumResult spectrum_sweep(const RodParams& tmpl, const std::vector<double>& forces,
                              const Grid& grid, int jobs) {
  if (forces.empty()) throw ValidationError("spectrum: empty force list");
  SpectrumResult r;
  r.rows.resize(forces.size());
  parallel_for(static_cast<int>(forces.size()), jobs, [&](int i) {
    const auto w = leading_eigenvalues(assemble_operator(tmpl.with_force(forces[i]), grid), 2, true);
    r.rows[i] = {forces[i], w[0], w.size() > 1 ? w[1] : cplx(NAN, NAN)};
  });
  try {
    r.hopf = find_hopf_threshold(tmpl, grid);
  } catch (const BracketError& e) {
    r.notice = e.what();
  }
  return r;
}

void write_spectrum_csv(const SpectrumResult& r, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  out << "force_tilde,re_w1,im_w1,re_w2,im_w2\n";
  for (const auto& row : r.rows)
    out << num(row.force) << ',' << num(row.w1.real()) << ',' << num(row.w1.imag()) << ','
        << num(row.w2.real()) << ',' << num(row.w2.imag()) << '\n';
}

nlohmann::json spectrum_summary(const SpectrumResult& r, const RodParams& tmpl, int grid_n) {
  nlohmann::json j = {{"params", tmpl.to_json()}, {"grid_n", grid_n}, {"points", r.rows.size()}};
  if (r.hopf) {
    j["force_star"] = r.hopf->force_star;
    j["force_crit"] = r.hopf->force_crit;
    j["omega_c"] = r.hopf->omega_c;
  } else {
    j["force_star"] = nullptr;
    j["force_crit"] = nullptr;
    j["omega_c"] = nullptr;
    j["notice"] = r.notice;
  }
  return j;
}

nlohmann::json landau_record(const LandauAnalysis& a, const HopfPoint& hp, int grid_n) {
  const LandauModel& m = a.model;
  auto opt = [&](double v) { return m.supercritical ? nlohmann::json(v) : nlohmann::json(nullptr); };
  nlohmann::json j = {{"params", a.params.with_force(0.0).to_json()},
                      {"grid_n", grid_n},
                      {"force_star", hp.force_star},
                      {"force_crit", m.force_crit},
                      {"omega_c", m.omega_c},
                      {"alpha", {m.alpha.real(), m.alpha.imag()}},
                      {"beta", {m.beta.real(), m.beta.imag()}},
                      {"supercritical", m.supercritical},
                      {"rho_abs", opt(m.rho_abs)},
                      {"sigma", opt(m.sigma)},
                      {"C", opt(m.amplitude_constant())}};
  if (!m.supercritical) {
    j["notice"] = m.alpha.real() >= 0.0 ? "subcritical: Re alpha >= 0, no small stable limit cycle"
                                        : "degenerate: Re beta <= 0, the pair does not cross";
  }
  return j;
}

}  // namespace rodhopf::bench
