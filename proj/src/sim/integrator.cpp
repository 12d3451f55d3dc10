#include <cmath>
#include <sstream>

#include "rodhopf/errors.hpp"
#include "rodhopf/sim.hpp"

namespace rodhopf {

namespace {

const double kGamma = 1.0 - std::sqrt(0.5);

}  // namespace

Integrator::Integrator(const RodParams& p, const Grid& grid, StepOptions opt)
    : model_(p, grid), opt_(opt) {}

void Integrator::factor(double hg) {
  Eigen::MatrixXd w = -hg * jac_;
  w.diagonal() += model_.mass();
  lu_.compute(w);
  lu_hg_ = hg;
  ++stats_.factorizations;
}

void Integrator::refresh(const Eigen::VectorXd& z, double hg) {
  if (opt_.policy == JacobianPolicy::frozen_base) {
    if (!have_jac_) jac_ = model_.jacobian(Eigen::VectorXd::Zero(model_.size()));
  } else {
    jac_ = model_.jacobian(z);
  }
  have_jac_ = true;
  jac_stale_ = false;
  ++stats_.jacobians;
  factor(hg);
}

// Simplified Newton for M (y - offset) = hg R(y).
bool Integrator::solve_stage(Eigen::VectorXd& y, const Eigen::VectorXd& offset, double hg) {
  const Eigen::VectorXd& mass = model_.mass();
  double prev = 0.0;
  int since_refresh = 0;
  for (int k = 0; k < opt_.max_newton; ++k, ++since_refresh) {
    const Eigen::VectorXd g = mass.cwiseProduct(y - offset) - hg * model_.residual(y);
    const Eigen::VectorXd d = lu_.solve(-g);
    if (!d.allFinite()) return false;
    y += d;
    ++stats_.newton_iterations;
    const double nd = d.cwiseAbs().maxCoeff();
    const double tol = opt_.newton_atol + opt_.newton_rtol * y.cwiseAbs().maxCoeff();
    const double rate = since_refresh > 0 ? nd / prev : 0.0;
    if (nd <= tol) return true;
    if (since_refresh > 0 && rate > 0.9 && nd <= 1e3 * tol) return true;
    // contraction too slow to reach tol within the remaining iterations
    const bool slow = since_refresh > 0 &&
                      (rate > 0.5 || nd * std::pow(rate, opt_.max_newton - k - 1) / (1.0 - rate) > tol);
    if (slow) {
      if (opt_.policy == JacobianPolicy::frozen_base) {
        if (rate > 1.0) return false;
      } else {
        refresh(y, hg);
        since_refresh = -1;
      }
    }
    prev = nd;
  }
  jac_stale_ = true;
  return false;
}

bool Integrator::try_step(Eigen::VectorXd& z, double h) {
  const double hg = kGamma * h;
  if (!have_jac_ || (jac_stale_ && opt_.policy == JacobianPolicy::refreshed)) {
    refresh(z, hg);
  } else if (lu_hg_ != hg) {
    factor(hg);
  }
  const Eigen::VectorXd& mass = model_.mass();
  for (int attempt = 0; attempt < 2; ++attempt) {
    Eigen::VectorXd y1 = z;
    if (attempt == 0 && slope_.size() == z.size()) y1 += hg * slope_;
    if (solve_stage(y1, z, hg)) {
      const Eigen::VectorXd k1 = mass.cwiseProduct(y1 - z) / hg;
      const Eigen::VectorXd offset = z + (1.0 - kGamma) * h * k1;
      Eigen::VectorXd y2 = z + (y1 - z) / kGamma;
      if (solve_stage(y2, offset, hg)) {
        slope_ = (y2 - z) / h;
        z = y2;
        ++stats_.steps;
        return true;
      }
    }
    if (opt_.policy == JacobianPolicy::frozen_base) return false;
    refresh(z, hg);
  }
  return false;
}

void Integrator::step(Eigen::VectorXd& z, double h) {
  if (!(h > 0.0)) throw ValidationError("step size must be positive");
  if (!try_step(z, h)) {
    std::ostringstream msg;
    msg << "Newton iteration failed at h = " << h << " with |z| = " << z.cwiseAbs().maxCoeff()
        << " after " << stats_.steps << " steps (" << stats_.jacobians << " Jacobians)";
    throw StiffnessError(msg.str());
  }
}

Integrator::Adaptive Integrator::adaptive_step(Eigen::VectorXd& z, double h, double rtol, double atol) {
  for (;;) {
    if (h < 1e-12) {
      std::ostringstream msg;
      msg << "step size underflow (h = " << h << ") after " << stats_.steps << " steps";
      throw StiffnessError(msg.str());
    }
    Eigen::VectorXd full = z, half = z;
    const bool ok = try_step(full, h) && try_step(half, 0.5 * h) && try_step(half, 0.5 * h);
    if (!ok) {
      h *= 0.25;
      ++stats_.rejected;
      continue;
    }
    double err = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      const double sc = atol + rtol * std::max(std::fabs(z(i)), std::fabs(half(i)));
      err = std::max(err, std::fabs(half(i) - full(i)) / sc);
    }
    err /= 3.0;
    const double factor = err > 0.0 ? 0.9 * std::pow(err, -1.0 / 3.0) : 2.0;
    if (err <= 1.0) {
      z = half;
      return {h, h * std::min(2.0, std::max(0.2, factor)), err};
    }
    ++stats_.rejected;
    h *= std::max(0.2, factor);
  }
}

Configuration step(const Configuration& state, double dt, const RodParams& p, const Grid& grid) {
  Integrator integ(p, grid);
  Eigen::VectorXd z = integ.model().pack(state);
  integ.step(z, dt);
  return integ.model().unpack(z);
}

}  // namespace rodhopf
