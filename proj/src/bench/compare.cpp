#include <cmath>
#include <fstream>
#include <sstream>

#include "rodhopf/bench.hpp"
#include "rodhopf/errors.hpp"

namespace rodhopf::bench {

namespace {

double field(const nlohmann::json& j, const char* key, const char* what) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw ValidationError(std::string(what) + ": missing numeric field '" + key + "'");
  return j.at(key).get<double>();
}

}  // namespace

void check_fingerprints(const nlohmann::json& landau, const nlohmann::json& sweep_meta) {
  std::ostringstream diff;
  const auto& pa = landau.at("params");
  const auto& pb = sweep_meta.at("params");
  for (const char* k : {"k1_tilde", "k2_tilde", "gamma1_tilde", "gamma3_tilde"}) {
    if (pa.value(k, NAN) != pb.value(k, NAN))
      diff << "  params." << k << ": landau " << pa.value(k, NAN) << " vs sweep " << pb.value(k, NAN) << '\n';
  }
  const double fa = field(landau, "force_crit", "landau"), fb = field(sweep_meta, "force_crit", "sweep");
  if (std::fabs(fa - fb) > 1e-3) diff << "  force_crit: landau " << num(fa) << " vs sweep " << num(fb) << '\n';
  if (!diff.str().empty()) throw ValidationError("compare: parameter fingerprints differ\n" + diff.str());
}

CompareReport compare(const nlohmann::json& landau, const std::vector<SweepRow>& rows,
                      double asymptotic_limit) {
  const double fc = field(landau, "force_crit", "landau");
  const double wc = field(landau, "omega_c", "landau");
  const bool super = landau.value("supercritical", false);
  if (!super) throw NotApplicableError("compare: the landau record is not supercritical");
  const double c = field(landau, "C", "landau"), sigma = field(landau, "sigma", "landau");

  CompareReport rep;
  for (const auto& r : rows) {
    CompareRow row;
    row.force = r.force;
    row.delta = r.force - fc;
    row.status = r.error.empty() ? to_string(r.status) : "failed";
    row.amplitude = r.amplitude;
    row.frequency = r.frequency;
    if (row.delta <= 0.0) {
      row.note = "below threshold";
      row.pass = r.status != RunStatus::saturated;
      rep.rows.push_back(row);
      continue;
    }
    row.predicted_amplitude = c * std::sqrt(row.delta);
    row.predicted_frequency = wc + row.delta * sigma;
    if (r.status == RunStatus::saturated) {
      row.amplitude_error = std::fabs(r.amplitude - row.predicted_amplitude) / row.predicted_amplitude;
      row.frequency_error = std::fabs(r.frequency - row.predicted_frequency) / row.predicted_frequency;
    } else {
      row.amplitude_error = row.frequency_error = NAN;
    }
    if (row.delta <= asymptotic_limit) {
      row.graded = true;
      ++rep.graded;
      row.pass = r.status == RunStatus::saturated && row.amplitude_error <= 0.10 && row.frequency_error <= 0.05;
      if (!row.pass) row.note = r.status == RunStatus::saturated ? "outside tolerance" : "not saturated";
    } else {
      row.note = "beyond asymptotic range";
    }
    rep.rows.push_back(row);
  }
  for (const auto& row : rep.rows) rep.pass = rep.pass && row.pass;
  return rep;
}

void write_compare_csv(const CompareReport& r, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  out << "force_tilde,delta_force,status,amplitude,predicted_amplitude,amplitude_error,"
         "frequency,predicted_frequency,frequency_error,graded,pass,note\n";
  for (const auto& row : r.rows)
    out << num(row.force) << ',' << num(row.delta) << ',' << row.status << ',' << num(row.amplitude) << ','
        << num(row.predicted_amplitude) << ',' << num(row.amplitude_error) << ',' << num(row.frequency) << ','
        << num(row.predicted_frequency) << ',' << num(row.frequency_error) << ',' << (row.graded ? 1 : 0)
        << ',' << (row.pass ? 1 : 0) << ',' << row.note << '\n';
}

nlohmann::json compare_summary(const CompareReport& r) {
  double worst_a = 0.0, worst_f = 0.0;
  for (const auto& row : r.rows) {
    if (!row.graded || !std::isfinite(row.amplitude_error)) continue;
    worst_a = std::max(worst_a, row.amplitude_error);
    worst_f = std::max(worst_f, row.frequency_error);
  }
  return {{"pass", r.pass},
          {"graded_rows", r.graded},
          {"rows", r.rows.size()},
          {"max_amplitude_error", worst_a},
          {"max_frequency_error", worst_f},
          {"amplitude_tolerance", 0.10},
          {"frequency_tolerance", 0.05}};
}

}  // namespace rodhopf::bench
