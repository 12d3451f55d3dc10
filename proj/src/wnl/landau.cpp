#include <cmath>
#include <limits>
#include <sstream>

#include "rodhopf/errors.hpp"
#include "rodhopf/wnl.hpp"

namespace rodhopf {

namespace {

Formulation resolve(Formulation f, const RodParams& p) {
  if (f == Formulation::automatic) return p.isotropic() ? Formulation::isotropic : Formulation::anisotropic;
  if (f == Formulation::isotropic && !p.isotropic())
    throw ValidationError("isotropic formulation requested for k1 != k2");
  return f;
}

}  // namespace

ForcingAssembly assemble_forcing(const CriticalMode& mode, const QuadraticCorrections& qc,
                                 const RodParams& p, const Grid& grid, Formulation f) {
  const int n = grid.size(), N = n - 1;
  const double w = mode.omega_c, k1 = p.k1(), k2 = p.k2(), nu = p.nu();
  const cplx iw(0.0, w);
  const Eigen::ArrayXcd Y = mode.Y.array(), th = mode.Theta.array();
  const Eigen::ArrayXcd tp = (grid.diff1() * mode.Theta).array();
  const Eigen::ArrayXcd u = grid.nodes().cast<cplx>().array();
  const Eigen::ArrayXcd P0 = qc.P0.array(), P2 = qc.P2.array();
  const Eigen::ArrayXcd x2 = qc.X2.array();

  ForcingAssembly fa;
  fa.formulation = resolve(f, p);
  fa.mu = p.mu();
  const Eigen::ArrayXcd h2 = (grid.diff1() * mode.Y).array() - nu * th;
  fa.H2 = h2.matrix();
  const Eigen::ArrayXcd cubic_y = 2.0 * x2 * th.conjugate() - Y.conjugate() * th * th + 2.0 * Y * th.abs2();
  const Eigen::ArrayXcd re_p0 = P0.real().cast<cplx>();

  if (fa.formulation == Formulation::isotropic) {
    fa.g1 = (iw * (1.0 - p.gamma1()) * cubic_y).matrix();
    fa.g2 = ((iw / k1) * th(N) * u).matrix();
    fa.g3 = (th.conjugate() * (tp * tp - P2) + 2.0 * th * (tp.abs2().cast<cplx>() - re_p0)).matrix();
    fa.g4 = (th - th(N)).matrix();
  } else {
    const double r = 1.0 - k2 / k1;
    const double m = fa.mu / k1;
    const Eigen::ArrayXcd s = P2 + k2 * h2;
    fa.g1 = (iw * (1.0 - (k2 / k1) * p.gamma1()) * cubic_y +
             r * (tp.conjugate() * s + 2.0 * tp * s.real().cast<cplx>()))
                .matrix();
    fa.g2 = ((iw / k1) * th(N) * u - r * tp).matrix();
    fa.g3 = (th.conjugate() * (tp * tp - m * P2) + 2.0 * th * (tp.abs2().cast<cplx>() - m * re_p0) -
             r * (P2 * h2.conjugate() + 2.0 * h2 * re_p0))
                .matrix();
    fa.g4 = (m * (th - th(N)) + r * h2).matrix();
  }
  const Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(n);
  fa.cubic = {zero, fa.g1, fa.g3 / p.gamma3()};
  fa.linear = {zero, fa.g2, fa.g4 / p.gamma3()};
  fa.slow = {zero, -mode.Y, -mode.Theta};
  return fa;
}

LandauModel landau_coefficients(const CriticalMode& mode, const AdjointMode& adjoint,
                                const QuadraticCorrections& qc, const RodParams& p,
                                const Grid& grid, Formulation f) {
  const GammaWeights gw = GammaWeights::from(p);
  const ForcingAssembly fa = assemble_forcing(mode, qc, p, grid, f);
  const ModeShape psi = adjoint.shape(), xi = mode.shape();
  LandauModel lm;
  lm.normalization = gamma_inner(grid, gw, psi, xi);
  const double scale = gamma_norm(grid, gw, psi) * gamma_norm(grid, gw, xi);
  if (!(std::abs(lm.normalization) >= 1e-10 * scale)) {
    std::ostringstream msg;
    msg << "degenerate normalisation (Psi, xi) = " << std::abs(lm.normalization) / scale
        << " after unit scaling";
    throw ConsistencyError(msg.str());
  }
  lm.alpha = gamma_inner(grid, gw, psi, fa.cubic) / lm.normalization;
  lm.beta = gamma_inner(grid, gw, psi, fa.linear) / lm.normalization;
  lm.omega_c = mode.omega_c;
  lm.force_crit = mode.force_crit;
  lm.supercritical = lm.alpha.real() < 0.0 && lm.beta.real() > 0.0;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  lm.rho_abs = lm.supercritical ? std::sqrt(-lm.beta.real() / lm.alpha.real()) : nan;
  lm.sigma = lm.supercritical
                 ? -lm.alpha.imag() * lm.beta.real() / lm.alpha.real() + lm.beta.imag()
                 : nan;
  return lm;
}

std::pair<cplx, cplx> landau_integrals_isotropic(const CriticalMode& mode, const AdjointMode& adjoint,
                                                 const QuadraticCorrections& qc, const RodParams& p,
                                                 const Grid& grid) {
  if (!p.isotropic()) throw ValidationError("isotropic integrals need k1 == k2");
  const int N = grid.size() - 1;
  const double w = mode.omega_c, kappa = p.k1();
  const Eigen::ArrayXcd wq = grid.quad_weights().cast<cplx>().array();
  const Eigen::ArrayXcd Y = mode.Y.array(), th = mode.Theta.array();
  const Eigen::ArrayXcd py = adjoint.PsiY.array().conjugate(), pt = adjoint.PsiTheta.array().conjugate();
  const Eigen::ArrayXcd tp = (grid.diff1() * mode.Theta).array();
  const Eigen::ArrayXcd u = grid.nodes().cast<cplx>().array();
  const Eigen::ArrayXcd P0 = qc.P0.array(), P2 = qc.P2.array(), x2 = qc.X2.array();

  const cplx norm = (wq * (py * Y + p.gamma3() * pt * th)).sum();
  const cplx a1 = (wq * cplx(0.0, w) * (1.0 - p.gamma1()) * py *
                   (2.0 * x2 * th.conjugate() - Y.conjugate() * th * th + 2.0 * Y * th.abs2()))
                      .sum();
  const cplx a2 = (wq * pt *
                   (th.conjugate() * (tp * tp - P2) +
                    2.0 * th * (tp.abs2().cast<cplx>() - P0.real().cast<cplx>())))
                      .sum();
  const cplx b = (wq * (cplx(0.0, w / kappa) * py * th(N) * u + (th - th(N)) * pt)).sum();
  return {(a1 + a2) / norm, b / norm};
}

TipPrediction predict_tip(const LandauModel& lm, double force_tilde) {
  if (!lm.supercritical) {
    std::ostringstream msg;
    msg << "no supercritical limit cycle: Re alpha = " << lm.alpha.real()
        << ", Re beta = " << lm.beta.real();
    throw NotApplicableError(msg.str());
  }
  const double df = force_tilde - lm.force_crit;
  return {df > 0.0 ? 2.0 * lm.rho_abs * std::sqrt(df) : 0.0, lm.omega_c + df * lm.sigma};
}

double solvability_residual(const CriticalMode& mode, const AdjointMode& adjoint,
                            const QuadraticCorrections& qc, const LandauModel& lm,
                            const RodParams& p, const Grid& grid, SolvabilityChannels ch,
                            Formulation f) {
  const GammaWeights gw = GammaWeights::from(p);
  const ForcingAssembly fa = assemble_forcing(mode, qc, p, grid, f);
  const double c = ch.cubic ? 1.0 : 0.0, l = ch.linear ? 1.0 : 0.0;
  const cplx dadt = c * lm.alpha + l * lm.beta;
  const ModeShape psi = adjoint.shape();
  const cplx proj = c * gamma_inner(grid, gw, psi, fa.cubic) + l * gamma_inner(grid, gw, psi, fa.linear) +
                    dadt * gamma_inner(grid, gw, psi, fa.slow);
  const cplx norm = gamma_inner(grid, gw, psi, mode.shape());
  const double scale = std::abs(norm) * (c * std::abs(lm.alpha) + l * std::abs(lm.beta));
  return scale > 0.0 ? std::abs(proj) / scale : std::abs(proj);
}

LandauAnalysis analyse(const RodParams& params_template, const Grid& grid, Formulation f) {
  const HopfPoint hp = find_hopf_threshold(params_template, grid);
  const RodParams p = params_template.with_force(hp.force_crit);
  const LinearOperator op = assemble_operator(p, grid);
  CriticalMode mode = critical_mode(op, hp.omega_c);
  AdjointMode adj = adjoint_mode(op, GammaWeights::from(p));
  QuadraticCorrections qc = quadratic_corrections(mode, p, grid);
  LandauModel lm = landau_coefficients(mode, adj, qc, p, grid, f);
  return {hp, p, std::move(mode), std::move(adj), std::move(qc), lm};
}

}  // namespace rodhopf
