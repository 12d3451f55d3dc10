#include <utility>

#include "rodhopf/errors.hpp"
#include "rodhopf/linear.hpp"

namespace rodhopf {

namespace {

using LdCMatrix = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>;

// Schur complement of the boundary unknowns. Returns the interior operator
// and the map interior -> boundary values.
std::pair<LdMatrix, LdMatrix> eliminate(const LdMatrix& s, const std::vector<int>& interior,
                                        const std::vector<int>& boundary) {
  const int ni = static_cast<int>(interior.size());
  const int nb = static_cast<int>(boundary.size());
  LdMatrix aii(ni, ni), aib(ni, nb), abi(nb, ni), abb(nb, nb);
  for (int r = 0; r < ni; ++r) {
    for (int c = 0; c < ni; ++c) aii(r, c) = s(interior[r], interior[c]);
    for (int c = 0; c < nb; ++c) aib(r, c) = s(interior[r], boundary[c]);
  }
  for (int r = 0; r < nb; ++r) {
    for (int c = 0; c < ni; ++c) abi(r, c) = s(boundary[r], interior[c]);
    for (int c = 0; c < nb; ++c) abb(r, c) = s(boundary[r], boundary[c]);
  }
  const LdMatrix lift = -abb.fullPivLu().solve(abi);
  return {aii + aib * lift, lift};
}

LdCVector to_ld(const Eigen::VectorXcd& v) {
  LdCVector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = {v(i).real(), v(i).imag()};
  return out;
}

cplx to_d(std::complex<long double> z) {
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

}  // namespace

ModeShape ModeShape::zero(int n) {
  return {Eigen::VectorXcd::Zero(n), Eigen::VectorXcd::Zero(n), Eigen::VectorXcd::Zero(n)};
}

ModeShape ModeShape::conj() const { return {x.conjugate(), y.conjugate(), theta.conjugate()}; }

LinearOperator::LinearOperator(const RodParams& params, const Grid& grid, BoundaryKind kind)
    : params_(params), grid_(grid), kind_(kind) {
  const int n = grid.size();
  const int N = n - 1;
  const int X = 0, Y = n, T = 2 * n;
  const LdMatrix& d1 = grid.diff1_ld();
  const LdMatrix& d2 = grid.diff2_ld();
  const long double k1 = params.k1(), k2 = params.k2();
  const long double g1 = params.gamma1(), g3 = params.gamma3();
  const long double f = params.force();
  const long double nu = 1.0L - f / k1;
  const long double mu = k2 * nu + f;

  a_ = LdMatrix::Zero(3 * n, 3 * n);
  mass_ = Eigen::VectorXd::Ones(3 * n);
  for (int i = 1; i < N; ++i) {
    a_.block(X + i, X, 1, n) = (k1 / g1) * d2.row(i);
    a_.block(Y + i, Y, 1, n) = k2 * d2.row(i);
    a_.block(Y + i, T, 1, n) = -mu * d1.row(i);
    a_.block(T + i, Y, 1, n) = (mu / g3) * d1.row(i);
    a_.block(T + i, T, 1, n) = d2.row(i) / g3;
    a_(T + i, T + i) -= mu * nu / g3;
  }
  for (int base : {X, Y, T}) {
    a_(base, base) = 1.0L;
    mass_(base) = 0.0;
    mass_(base + N) = 0.0;
  }
  bc_rows_ = {{X, "x(0) = 0"}, {Y, "y(0) = 0"}, {T, "theta(0) = 0"}};
  a_.block(X + N, X, 1, n) = d1.row(N);
  bc_rows_.push_back({X + N, "x'(1) = 0"});
  if (kind == BoundaryKind::direct) {
    a_.block(Y + N, Y, 1, n) = d1.row(N);
    a_(Y + N, T + N) = -nu;
    a_.block(T + N, T, 1, n) = d1.row(N);
    bc_rows_.push_back({Y + N, "y'(1) - nu theta(1) = 0"});
    bc_rows_.push_back({T + N, "theta'(1) = 0"});
  } else {
    a_.block(Y + N, Y, 1, n) = k2 * d1.row(N);
    a_(Y + N, T + N) = -mu;
    a_.block(T + N, T, 1, n) = d1.row(N);
    a_(T + N, Y + N) = f;
    bc_rows_.push_back({Y + N, "k2 psiY'(1) - mu psiTheta(1) = 0"});
    bc_rows_.push_back({T + N, "psiTheta'(1) + F psiY(1) = 0"});
  }

  std::vector<int> interior, boundary;
  for (int i = 1; i < N; ++i) interior.push_back(i);
  for (int i = 1; i < N; ++i) interior.push_back(n + i);
  boundary = {0, N, n, n + N};
  std::tie(t_, t_lift_) = eliminate(a_.block(Y, Y, 2 * n, 2 * n), interior, boundary);

  interior.resize(N - 1);
  std::tie(l_, l_lift_) = eliminate(a_.block(X, X, n, n), interior, {0, N});
}

LinearOperator assemble_operator(const RodParams& params, const Grid& grid) {
  return LinearOperator(params, grid, BoundaryKind::direct);
}

LinearOperator assemble_adjoint_operator(const RodParams& params, const Grid& grid) {
  return LinearOperator(params, grid, BoundaryKind::adjoint);
}

ModeShape LinearOperator::expand_transverse(const LdCVector& interior) const {
  const int n = grid_.size(), m = n - 2;
  if (interior.size() != 2 * m) throw ValidationError("expand_transverse: wrong interior size");
  const LdCVector b = t_lift_.cast<std::complex<long double>>() * interior;
  ModeShape s = ModeShape::zero(n);
  for (int i = 0; i < m; ++i) {
    s.y(i + 1) = to_d(interior(i));
    s.theta(i + 1) = to_d(interior(m + i));
  }
  s.y(0) = to_d(b(0));
  s.y(n - 1) = to_d(b(1));
  s.theta(0) = to_d(b(2));
  s.theta(n - 1) = to_d(b(3));
  return s;
}

ModeShape LinearOperator::expand_longitudinal(const LdCVector& interior) const {
  const int n = grid_.size(), m = n - 2;
  if (interior.size() != m) throw ValidationError("expand_longitudinal: wrong interior size");
  const LdCVector b = l_lift_.cast<std::complex<long double>>() * interior;
  ModeShape s = ModeShape::zero(n);
  for (int i = 0; i < m; ++i) s.x(i + 1) = to_d(interior(i));
  s.x(0) = to_d(b(0));
  s.x(n - 1) = to_d(b(1));
  return s;
}

Eigen::VectorXcd LinearOperator::apply(const ModeShape& xi) const {
  const int n = grid_.size();
  if (xi.x.size() != n || xi.y.size() != n || xi.theta.size() != n)
    throw ValidationError("apply: shape does not match the grid");
  LdCVector v(3 * n);
  v << to_ld(xi.x), to_ld(xi.y), to_ld(xi.theta);
  const LdCVector r = a_.cast<std::complex<long double>>() * v;
  Eigen::VectorXcd out(3 * n);
  for (int i = 0; i < 3 * n; ++i) out(i) = to_d(r(i));
  return out;
}

double LinearOperator::interior_residual(const ModeShape& xi, cplx omega) const {
  const int n = grid_.size();
  const Eigen::VectorXcd av = apply(xi);
  Eigen::VectorXcd v(3 * n);
  v << xi.x, xi.y, xi.theta;
  double res = 0.0;
  for (int i = 0; i < 3 * n; ++i)
    if (mass_(i) != 0.0) res = std::max(res, std::abs(av(i) - omega * v(i)));
  return res / v.cwiseAbs().maxCoeff();
}

std::pair<cplx, cplx> LinearOperator::free_end_residuals(const ModeShape& xi) const {
  const int n = grid_.size(), N = n - 1;
  const Eigen::VectorXcd av = apply(xi);
  return {av(n + N), av(2 * n + N)};
}

}  // namespace rodhopf
