#include <cmath>
#include <sstream>

#include "rodhopf/errors.hpp"
#include "rodhopf/wnl.hpp"

namespace rodhopf {

namespace {

using ldc = std::complex<long double>;
using LdCMatrix = Eigen::Matrix<ldc, Eigen::Dynamic, Eigen::Dynamic>;

void check_threshold(const CriticalMode& mode, const RodParams& p, const Grid& grid) {
  if (mode.Y.size() != grid.size() || mode.Theta.size() != grid.size())
    throw ValidationError("critical mode does not live on this grid");
  if (std::fabs(mode.force_crit - p.force()) > 1e-9 * std::max(1.0, std::fabs(p.force()))) {
    std::ostringstream msg;
    msg << "parameters at F = " << p.force() << " do not match the mode computed at F = "
        << mode.force_crit;
    throw ValidationError(msg.str());
  }
}

// Collocation solve of (k1 D2 + shift I) X = f with X(0) = 0, X'(1) = b.
Eigen::VectorXcd collocate(const Eigen::VectorXcd& f, cplx b, cplx shift, const RodParams& p,
                           const Grid& grid) {
  const int n = grid.size(), N = n - 1;
  LdCMatrix a = (static_cast<long double>(p.k1()) * grid.diff2_ld()).cast<ldc>();
  for (int i = 0; i < n; ++i) a(i, i) += ldc(shift.real(), shift.imag());
  a.row(0).setZero();
  a(0, 0) = 1.0L;
  a.row(N) = grid.diff1_ld().row(N).cast<ldc>();
  Eigen::Matrix<ldc, Eigen::Dynamic, 1> r(n);
  for (int i = 0; i < n; ++i) r(i) = ldc(f(i).real(), f(i).imag());
  r(0) = 0.0L;
  r(N) = ldc(b.real(), b.imag());
  const Eigen::Matrix<ldc, Eigen::Dynamic, 1> x = a.partialPivLu().solve(r);
  Eigen::VectorXcd out(n);
  for (int i = 0; i < n; ++i)
    out(i) = cplx(static_cast<double>(x(i).real()), static_cast<double>(x(i).imag()));
  return out;
}

void check_agreement(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b, const char* what) {
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  const double diff = (a - b).cwiseAbs().maxCoeff() / scale;
  if (diff > 1e-6) {
    std::ostringstream msg;
    msg << what << ": collocation and closed form differ by " << diff;
    throw ConsistencyError(msg.str());
  }
}

}  // namespace

QuadraticForcing quadratic_forcing(const CriticalMode& mode, const RodParams& p, const Grid& grid) {
  check_threshold(mode, p, grid);
  const int N = grid.size() - 1;
  const double nu = p.nu(), w = mode.omega_c;
  const Eigen::VectorXcd& Y = mode.Y;
  const Eigen::VectorXcd& Th = mode.Theta;
  const Eigen::VectorXcd yp = grid.diff1() * Y;
  const Eigen::VectorXcd ypp = grid.diff2() * Y;
  const Eigen::VectorXcd tp = grid.diff1() * Th;
  QuadraticForcing q;
  q.H2 = yp - nu * Th;
  const Eigen::ArrayXcd bulk = cplx(0.0, w * p.gamma1()) * Y.array() - p.k1() * ypp.array();
  const double dk = p.k2() - p.k1();
  q.f0 = (Th.array().conjugate() * bulk + dk * tp.array() * q.H2.array().conjugate()).matrix();
  q.f2 = (Th.array() * bulk + dk * tp.array() * q.H2.array()).matrix();
  q.b0 = -0.5 * nu * std::norm(Th(N));
  q.b2 = -0.5 * nu * Th(N) * Th(N);
  return q;
}

Eigen::VectorXcd solve_X0_collocation(const QuadraticForcing& q, const RodParams& p, const Grid& grid) {
  return collocate(q.f0, q.b0, 0.0, p, grid);
}

Eigen::VectorXcd solve_X0_closed_form(const QuadraticForcing& q, const RodParams& p, const Grid& grid) {
  const int N = grid.size() - 1;
  const Eigen::MatrixXd& Q = grid.cumulative_integral();
  const Eigen::VectorXcd inner = Q * q.f0;
  const Eigen::VectorXcd from_one = inner.array() - inner(N);
  return q.b0 * grid.nodes().cast<cplx>() + (Q * from_one) / p.k1();
}

cplx principal_lambda(double omega_c, const RodParams& p) {
  return std::sqrt(cplx(0.0, -2.0 * omega_c * p.gamma1() / p.k1()));
}

Eigen::VectorXcd solve_X2_collocation(const QuadraticForcing& q, double omega_c, const RodParams& p,
                                      const Grid& grid) {
  return collocate(q.f2, q.b2, cplx(0.0, -2.0 * omega_c * p.gamma1()), p, grid);
}

Eigen::VectorXcd solve_X2_closed_form(const QuadraticForcing& q, cplx lambda, const RodParams& p,
                                      const Grid& grid) {
  const Eigen::MatrixXd& Q = grid.cumulative_integral();
  const Eigen::ArrayXcd u = grid.nodes().cast<cplx>().array();
  const Eigen::ArrayXcd s = (lambda * u).sin(), c = (lambda * u).cos();
  const Eigen::ArrayXcd f = q.f2.array();
  const Eigen::VectorXcd sc = Q * (c * f).matrix();
  const Eigen::VectorXcd ss = Q * (s * f).matrix();
  // integral_0^u sin(lambda (u - z)) f(z) dz
  const Eigen::ArrayXcd conv = s * sc.array() - c * ss.array();
  const cplx end = grid.quad_weights().cast<cplx>().dot((lambda * (1.0 - u)).cos().matrix().cwiseProduct(q.f2));
  const cplx amp = (q.b2 - end / p.k1()) / (lambda * std::cos(lambda));
  return (amp * s + conv / (lambda * p.k1())).matrix();
}

Eigen::VectorXcd solve_X0(const CriticalMode& mode, const RodParams& p, const Grid& grid) {
  const QuadraticForcing q = quadratic_forcing(mode, p, grid);
  Eigen::VectorXcd x = solve_X0_collocation(q, p, grid);
  check_agreement(x, solve_X0_closed_form(q, p, grid), "X0");
  return x;
}

std::pair<Eigen::VectorXcd, cplx> solve_X2(const CriticalMode& mode, const RodParams& p,
                                           const Grid& grid) {
  const QuadraticForcing q = quadratic_forcing(mode, p, grid);
  const cplx lambda = principal_lambda(mode.omega_c, p);
  Eigen::VectorXcd x = solve_X2_collocation(q, mode.omega_c, p, grid);
  check_agreement(x, solve_X2_closed_form(q, lambda, p, grid), "X2");
  return {x, lambda};
}

std::pair<Eigen::VectorXcd, Eigen::VectorXcd> stress_corrections(const Eigen::VectorXcd& X0,
                                                                  const Eigen::VectorXcd& X2,
                                                                  const CriticalMode& mode,
                                                                  const RodParams& p,
                                                                  const Grid& grid) {
  const double nu = p.nu();
  const Eigen::ArrayXcd th = mode.Theta.array();
  const Eigen::ArrayXcd h2 = (grid.diff1() * mode.Y).array() - nu * th;
  const Eigen::ArrayXcd x0p = (grid.diff1() * X0).array();
  const Eigen::ArrayXcd x2p = (grid.diff1() * X2).array();
  Eigen::VectorXcd p0 = (p.k1() * (x0p + th.conjugate() * h2 + 0.5 * nu * th.abs2())).matrix();
  Eigen::VectorXcd p2 = (p.k1() * (x2p + th * h2 + 0.5 * nu * th * th)).matrix();
  return {p0, p2};
}

QuadraticCorrections quadratic_corrections(const CriticalMode& mode, const RodParams& p,
                                           const Grid& grid) {
  QuadraticCorrections qc;
  qc.X0 = solve_X0(mode, p, grid);
  std::tie(qc.X2, qc.lambda) = solve_X2(mode, p, grid);
  std::tie(qc.P0, qc.P2) = stress_corrections(qc.X0, qc.X2, mode, p, grid);
  return qc;
}

}  // namespace rodhopf
