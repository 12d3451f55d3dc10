#include <cmath>
#include <numbers>
#include <sstream>

#include "rodhopf/errors.hpp"
#include "rodhopf/sim.hpp"

namespace rodhopf {

namespace {

// Vertex of the parabola through three samples.
std::pair<double, double> vertex(double t0, double y0, double t1, double y1, double t2, double y2) {
  const double d0 = (y1 - y0) / (t1 - t0), d1 = (y2 - y1) / (t2 - t1);
  const double curv = (d1 - d0) / (t2 - t0);
  if (curv == 0.0) return {t1, y1};
  const double tv = 0.5 * (t0 + t1) - d0 / (2.0 * curv);
  const double yv = y0 + d0 * (tv - t0) + curv * (tv - t0) * (tv - t1);
  if (tv < t0 || tv > t2) return {t1, y1};
  return {tv, yv};
}

}  // namespace

Extrema find_extrema(const std::vector<double>& t, const std::vector<double>& y) {
  Extrema e;
  for (size_t k = 1; k + 1 < y.size(); ++k) {
    const bool up = y[k] > y[k - 1] && y[k] >= y[k + 1];
    const bool down = y[k] < y[k - 1] && y[k] <= y[k + 1];
    if (up || down) {
      const auto v = vertex(t[k - 1], y[k - 1], t[k], y[k], t[k + 1], y[k + 1]);
      (up ? e.maxima : e.minima).push_back(v);
    }
  }
  return e;
}

std::vector<double> cycle_amplitudes(const Extrema& e) {
  std::vector<double> amps;
  size_t j = 0;
  for (const auto& mx : e.maxima) {
    while (j + 1 < e.minima.size() && e.minima[j + 1].first < mx.first) ++j;
    if (j < e.minima.size() && e.minima[j].first < mx.first) amps.push_back(0.5 * (mx.second - e.minima[j].second));
  }
  return amps;
}

bool saturated(const std::vector<double>& amps, double drift, int periods) {
  if (static_cast<int>(amps.size()) < periods + 1) return false;
  for (size_t k = amps.size() - periods; k < amps.size(); ++k) {
    if (!(amps[k] > 0.0)) return false;
    if (std::fabs(amps[k] - amps[k - 1]) > drift * amps[k]) return false;
  }
  return true;
}

CycleEstimate extract_cycle(const std::vector<double>& t, const std::vector<double>& y,
                            double window_fraction) {
  if (t.size() != y.size() || t.size() < 3) throw InsufficientDataError("extract_cycle: series too short");
  const double t_start = t.back() - window_fraction * (t.back() - t.front());
  size_t first = 0;
  while (first < t.size() && t[first] < t_start) ++first;
  const std::vector<double> tw(t.begin() + first, t.end()), yw(y.begin() + first, y.end());
  const Extrema e = find_extrema(tw, yw);
  if (e.maxima.size() < 5) {
    std::ostringstream msg;
    msg << "extract_cycle: " << e.maxima.size() << " peaks in the final window, need 5";
    throw InsufficientDataError(msg.str());
  }
  double hi = -INFINITY, lo = INFINITY;
  for (const auto& m : e.maxima) hi = std::max(hi, m.second);
  for (const auto& m : e.minima) lo = std::min(lo, m.second);
  if (e.minima.empty()) lo = *std::min_element(yw.begin(), yw.end());

  // mean level for the crossings, from the same window
  const double level = 0.5 * (hi + lo);
  std::vector<double> ups;
  for (size_t k = 1; k < tw.size(); ++k) {
    if (yw[k - 1] < level && yw[k] >= level) {
      const double s = (level - yw[k - 1]) / (yw[k] - yw[k - 1]);
      ups.push_back(tw[k - 1] + s * (tw[k] - tw[k - 1]));
    }
  }
  if (ups.size() < 2) throw InsufficientDataError("extract_cycle: fewer than two up-crossings");
  const double period = (ups.back() - ups.front()) / static_cast<double>(ups.size() - 1);
  return {0.5 * (hi - lo), 2.0 * std::numbers::pi / period, static_cast<int>(e.maxima.size())};
}

CycleEstimate extract_cycle(const SimRecord& rec) { return extract_cycle(rec.times, rec.tip_y); }

}  // namespace rodhopf
