#pragma once

// Test-side reference solutions, written without the library's
// discretisation.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "rodhopf/params.hpp"
#include "rodhopf/sim.hpp"

namespace oracle {

using cplx = std::complex<double>;

// Transverse eigenproblem of the straight compressed rod as a first-order
// system s' = A s in s = (y, y', theta, theta'):
//   lambda y = k2 y'' - mu theta',  g3 lambda theta = theta'' + mu (y' - nu theta).
// The clamp leaves span{e_y', e_theta'} at u = 0; the free-end rows are
// y' - nu theta and theta'. The exterior-product (compound matrix) form keeps
// only the dominant growth, so one matrix exponential over [0, 1] suffices.
inline cplx shooting_det(cplx lambda, const rodhopf::RodParams& p) {
  using ld = long double;
  using lc = std::complex<ld>;
  const ld k2 = p.k2(), mu = p.mu(), nu = p.nu(), g3 = p.gamma3();
  const lc lam(lambda.real(), lambda.imag());
  Eigen::Matrix<lc, 4, 4> a = Eigen::Matrix<lc, 4, 4>::Zero();
  a(0, 1) = 1.0L;
  a(1, 0) = lam / k2;
  a(1, 3) = mu / k2;
  a(2, 3) = 1.0L;
  a(3, 1) = -mu;
  a(3, 2) = g3 * lam + mu * nu;

  static const int pairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  auto d = [](int i, int j) { return i == j ? 1.0L : 0.0L; };
  Eigen::Matrix<lc, 6, 6> c;
  for (int r = 0; r < 6; ++r) {
    const int i = pairs[r][0], j = pairs[r][1];
    for (int s = 0; s < 6; ++s) {
      const int k = pairs[s][0], l = pairs[s][1];
      c(r, s) = a(i, k) * d(j, l) - a(i, l) * d(j, k) + a(j, l) * d(i, k) - a(j, k) * d(i, l);
    }
  }
  const Eigen::Matrix<lc, 6, 6> e = c.exp();
  const Eigen::Matrix<lc, 6, 1> w = e.col(4);  // e_y' ^ e_theta'

  const ld b1[4] = {0.0L, 1.0L, -nu, 0.0L};
  const ld b2[4] = {0.0L, 0.0L, 0.0L, 1.0L};
  lc det = 0.0L;
  for (int r = 0; r < 6; ++r) {
    const int k = pairs[r][0], l = pairs[r][1];
    det += (b1[k] * b2[l] - b1[l] * b2[k]) * w(r);
  }
  return {static_cast<double>(det.real()), static_cast<double>(det.imag())};
}

// The determinant is entire in lambda, so the trapezoidal Cauchy integral
// converges geometrically.
inline cplx shooting_det_derivative(cplx lambda, const rodhopf::RodParams& p, double radius = 1.0) {
  const int m = 24;
  cplx sum = 0.0;
  for (int k = 0; k < m; ++k) {
    const cplx e = std::polar(1.0, 2.0 * std::numbers::pi * k / m);
    sum += shooting_det(lambda + radius * e, p) / e;
  }
  return sum / (static_cast<double>(m) * radius);
}

inline cplx continuum_eigenvalue(const rodhopf::RodParams& p, cplx guess) {
  cplx a = guess, b = guess * (1.0 + 1e-7) + 1e-7;
  cplx fa = shooting_det(a, p), fb = shooting_det(b, p);
  for (int it = 0; it < 100; ++it) {
    if (fb == fa) return b;
    const cplx c = b - fb * (b - a) / (fb - fa);
    if (std::abs(c - b) <= 1e-10 * std::max(1.0, std::abs(c))) return c;
    a = b, fa = fb;
    b = c, fb = shooting_det(b, p);
  }
  throw std::runtime_error("continuum_eigenvalue: no convergence");
}

// Force at which the continuum eigenvalue seeded by `guess` at force f0
// reaches the imaginary axis. Returns (force, omega).
inline std::pair<double, double> continuum_hopf(const rodhopf::RodParams& tmpl, double f0, cplx guess) {
  cplx lam = continuum_eigenvalue(tmpl.with_force(f0), guess);
  double fa = f0, ga = lam.real();
  double fb = f0 + 1e-3;
  cplx lb = continuum_eigenvalue(tmpl.with_force(fb), lam);
  double gb = lb.real();
  for (int it = 0; it < 60; ++it) {
    const double fc = fb - gb * (fb - fa) / (gb - ga);
    const cplx lc = continuum_eigenvalue(tmpl.with_force(fc), lb);
    fa = fb, ga = gb;
    fb = fc, lb = lc, gb = lc.real();
    if (std::fabs(fb - fa) < 1e-10 * fb) return {fb, std::fabs(lb.imag())};
  }
  throw std::runtime_error("continuum_hopf: no convergence");
}

// Double real root: shooting_det = d/dlambda shooting_det = 0. Newton in
// (lambda, F) with finite-difference Jacobian.
inline std::pair<double, double> continuum_merger(const rodhopf::RodParams& tmpl, double f0, double lam0) {
  double lam = lam0, f = f0;
  const double scale = std::abs(shooting_det(lam0, tmpl.with_force(f0))) + 1e-300;
  auto eqs = [&](double l, double ff) {
    const auto p = tmpl.with_force(ff);
    return Eigen::Vector2d(shooting_det(l, p).real() / scale,
                           shooting_det_derivative(l, p).real() / scale);
  };
  for (int it = 0; it < 50; ++it) {
    const Eigen::Vector2d g = eqs(lam, f);
    const double hl = 1e-6 * std::max(1.0, std::fabs(lam)), hf = 1e-6 * std::max(1.0, f);
    Eigen::Matrix2d jac;
    jac.col(0) = (eqs(lam + hl, f) - eqs(lam - hl, f)) / (2 * hl);
    jac.col(1) = (eqs(lam, f + hf) - eqs(lam, f - hf)) / (2 * hf);
    const Eigen::Vector2d step = jac.partialPivLu().solve(-g);
    lam += step(0);
    f += step(1);
    if (std::fabs(step(1)) < 1e-10 * f && std::fabs(step(0)) < 1e-8 * std::fabs(lam)) return {f, lam};
  }
  throw std::runtime_error("continuum_merger: no convergence");
}

// Longitudinal eigenvalues -(k1/g1) ((j + 1/2) pi)^2 of x clamped at 0 and
// stress-free at 1.
inline double longitudinal_eigenvalue(const rodhopf::RodParams& p, int j) {
  const double s = (j + 0.5) * std::numbers::pi;
  return -p.k1() / p.gamma1() * s * s;
}

// First Lyapunov coefficient of the discretised DAE M z' = R(z) by
// centre-manifold reduction. Derivatives of R come from complex steps and
// Cauchy integrals of the complex residual, never from the analytic Jacobian.
struct CentreManifold {
  cplx lambda;  // critical eigenvalue of the DAE
  cplx alpha;   // coefficient of |w|^2 w, eigenvector scaled to tip y = 1
};

inline CentreManifold centre_manifold_alpha(const rodhopf::RodModel& model, cplx seed) {
  const int m = model.size();
  const Eigen::VectorXd& mass = model.mass();
  auto residual = [&](const Eigen::VectorXcd& z) { return model.residual(z); };

  Eigen::MatrixXd a(m, m);
  const double h = 1e-30;
  for (int j = 0; j < m; ++j) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(m);
    e(j) = cplx(0.0, h);
    a.col(j) = residual(e).imag() / h;
  }
  const Eigen::MatrixXcd ac = a.cast<cplx>();
  const Eigen::MatrixXcd mm = mass.cast<cplx>().asDiagonal();

  // inverse iteration from the seed, then Newton on (q, lambda) with the tip
  // normalisation
  const int tip = 2 * model.nodes() - 1;
  Eigen::VectorXcd q = Eigen::VectorXcd::Ones(m);
  {
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(ac - seed * mm);
    for (int it = 0; it < 8; ++it) {
      q = lu.solve(mm * q);
      q /= q(tip);
    }
  }
  cplx lam = seed;
  for (int it = 0; it < 6; ++it) {
    Eigen::MatrixXcd j = Eigen::MatrixXcd::Zero(m + 1, m + 1);
    j.topLeftCorner(m, m) = ac - lam * mm;
    j.block(0, m, m, 1) = -(mm * q);
    j(m, tip) = 1.0;
    Eigen::VectorXcd rhs(m + 1);
    rhs.head(m) = -(ac * q - lam * (mm * q));
    rhs(m) = 0.0;
    const Eigen::VectorXcd d = j.partialPivLu().solve(rhs);
    q += d.head(m);
    lam += d(m);
  }
  Eigen::VectorXcd p = Eigen::VectorXcd::Ones(m);
  {
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu((ac - lam * mm).adjoint());
    for (int it = 0; it < 8; ++it) {
      p = lu.solve(mm.adjoint() * p);
      p /= p.cwiseAbs().maxCoeff();
    }
  }
  p /= std::conj(p.dot(mm * q));  // p^H M q = 1

  // Taylor coefficient of s^j t^k in R(s u + t v), by a 2-D Cauchy integral
  const int n = 12;
  const double r = 1e-2;
  auto coefficient = [&](const Eigen::VectorXcd& u, const Eigen::VectorXcd& v, int jj, int kk) {
    Eigen::VectorXcd sum = Eigen::VectorXcd::Zero(m);
    for (int ia = 0; ia < n; ++ia) {
      const cplx ea = std::polar(1.0, 2.0 * std::numbers::pi * ia / n);
      for (int ib = 0; ib < n; ++ib) {
        const cplx eb = std::polar(1.0, 2.0 * std::numbers::pi * ib / n);
        const Eigen::VectorXcd z = r * ea * u + r * eb * v;
        sum += residual(z) * std::pow(std::conj(ea), jj) * std::pow(std::conj(eb), kk);
      }
    }
    return Eigen::VectorXcd(sum / (static_cast<double>(n * n) * std::pow(r, jj + kk)));
  };
  const Eigen::VectorXcd qb = q.conjugate();
  const Eigen::VectorXcd bqq = 2.0 * coefficient(q, qb, 2, 0);
  const Eigen::VectorXcd bqqb = coefficient(q, qb, 1, 1);
  const Eigen::VectorXcd cqqqb = 2.0 * coefficient(q, qb, 2, 1);

  const double omega = lam.imag();
  const Eigen::VectorXcd h20 = (cplx(0.0, 2.0 * omega) * mm - ac).partialPivLu().solve(bqq);
  const Eigen::VectorXcd h11 = -ac.partialPivLu().solve(bqqb);
  const Eigen::VectorXcd b1 = coefficient(qb, h20, 1, 1);
  const Eigen::VectorXcd b2 = coefficient(q, h11, 1, 1);
  const cplx g21 = p.dot(cqqqb + b1 + 2.0 * b2);
  return {lam, 0.5 * g21};
}

}  // namespace oracle
