#include <cmath>
#include <functional>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>

#include "rodhopf/errors.hpp"
#include "rodhopf/linear.hpp"

namespace rodhopf {

namespace {

std::vector<cplx> leading_pair(const RodParams& tmpl, const Grid& grid, double force, bool refine) {
  return leading_eigenvalues(assemble_operator(tmpl.with_force(force), grid), 2, refine);
}

double polish(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0) return 0.5 * (lo + hi);
  boost::uintmax_t iters = 40;
  auto tol = [](double a, double b) { return std::fabs(b - a) <= 1e-12 * std::max(1.0, std::fabs(a)); };
  const auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
  return 0.5 * (r.first + r.second);
}

// First scan interval [a, b] on which pred turns true, then bisection.
std::pair<double, double> bracket(const std::function<bool(double)>& pred, double from, double to,
                                  double step, double tol, const char* what) {
  if (pred(from)) {
    std::ostringstream msg;
    msg << what << ": condition already holds at the bracket start " << from;
    throw BracketError(msg.str());
  }
  double lo = from, hi = from;
  bool found = false;
  while (hi < to) {
    lo = hi;
    hi = std::min(to, hi + step);
    if (pred(hi)) {
      found = true;
      break;
    }
  }
  if (!found) {
    std::ostringstream msg;
    msg << what << ": no transition in [" << from << ", " << to << "]";
    throw BracketError(msg.str());
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (pred(mid) ? hi : lo) = mid;
  }
  return {lo, hi};
}

}  // namespace

double find_flutter_onset(const RodParams& tmpl, const Grid& grid, const ThresholdOptions& opt) {
  auto oscillatory = [&](double f) { return leading_pair(tmpl, grid, f, false)[0].imag() != 0.0; };
  const auto [lo, hi] = bracket(oscillatory, opt.force_min, opt.force_max, opt.scan_step,
                                opt.tolerance, "flutter onset");
  // (w1 - w2)^2 is smooth through the merger and changes sign there
  auto disc = [&](double f) {
    const auto w = leading_pair(tmpl, grid, f, false);
    return std::real((w[0] - w[1]) * (w[0] - w[1]));
  };
  return polish(disc, lo, hi);
}

HopfPoint find_hopf_threshold(const RodParams& tmpl, const Grid& grid, const ThresholdOptions& opt) {
  HopfPoint hp;
  hp.force_star = find_flutter_onset(tmpl, grid, opt);
  auto growing = [&](double f) { return leading_pair(tmpl, grid, f, false)[0].real() > 0.0; };
  const auto [lo, hi] = bracket(growing, hp.force_star, opt.force_max, opt.scan_step,
                                opt.tolerance, "Hopf threshold");
  auto growth = [&](double f) { return leading_pair(tmpl, grid, f, true)[0].real(); };
  hp.force_crit = polish(growth, lo, hi);
  const auto w = leading_pair(tmpl, grid, hp.force_crit, true);
  if (std::fabs(w[0].real()) > 1e-8) {
    std::ostringstream msg;
    msg << "Hopf threshold: residual growth rate " << w[0].real() << " at F = " << hp.force_crit;
    throw ConsistencyError(msg.str());
  }
  hp.omega_c = std::fabs(w[0].imag());
  return hp;
}

}  // namespace rodhopf
