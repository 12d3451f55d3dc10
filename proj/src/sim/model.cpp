#include <cmath>
#include <sstream>
#include <type_traits>

#include "rodhopf/errors.hpp"
#include "rodhopf/sim.hpp"

namespace rodhopf {

namespace {

template <class T>
auto times(const Eigen::MatrixXd& m, const Eigen::Matrix<T, Eigen::Dynamic, 1>& v) {
  if constexpr (std::is_same_v<T, double>) {
    return Eigen::VectorXd(m * v);
  } else {
    return Eigen::Matrix<T, Eigen::Dynamic, 1>(m.cast<T>() * v);
  }
}

}  // namespace

RodModel::RodModel(const RodParams& p, const Grid& grid) : params_(p), grid_(grid) {
  const int n = grid.size(), N = n - 1;
  mass_ = Eigen::VectorXd::Ones(3 * N);
  for (int f = 0; f < 3; ++f) mass_(f * N + N - 1) = 0.0;
  d1c_ = grid.diff1().rightCols(N);
  d2c_ = (grid.diff1() * grid.diff1()).rightCols(N);
}

Eigen::VectorXd RodModel::pack(const Configuration& c) const {
  c.check_size(grid_.size());
  const int N = nodes();
  Eigen::VectorXd z(3 * N);
  z.segment(0, N) = c.x.tail(N) - params_.nu() * grid_.nodes().tail(N);
  z.segment(N, N) = c.y.tail(N);
  z.segment(2 * N, N) = c.theta.tail(N);
  return z;
}

Configuration RodModel::unpack(const Eigen::VectorXd& z) const {
  const int n = grid_.size(), N = n - 1;
  Configuration c{Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
  c.x.tail(N) = z.segment(0, N) + params_.nu() * grid_.nodes().tail(N);
  c.y.tail(N) = z.segment(N, N);
  c.theta.tail(N) = z.segment(2 * N, N);
  return c;
}

// Strains are evaluated relative to the base state so that it is an exact
// zero of the residual: x' - nu = a, h1 - nu = e1.
template <class V>
void RodModel::evaluate(const V& z, V* packed, TimeDerivative* full) const {
  using T = typename V::Scalar;
  using A = Eigen::Array<T, Eigen::Dynamic, 1>;
  const int n = grid_.size(), N = n - 1;
  const double k1 = params_.k1(), k2 = params_.k2(), nu = params_.nu(), f = params_.force();
  const Eigen::MatrixXd& d1 = grid_.diff1();

  V th = V::Zero(n);
  th.tail(N) = z.segment(2 * N, N);
  const A a = times<T>(d1c_, z.segment(0, N)).array();
  const A b = times<T>(d1c_, z.segment(N, N)).array();
  const A p = times<T>(d1c_, z.segment(2 * N, N)).array();
  const A c = th.array().cos(), s = th.array().sin();
  const A half = (T(0.5) * th.array()).sin();
  const A cm1 = T(-2.0) * half * half;

  const A e1 = c * a + nu * cm1 + s * b;
  const A h1 = nu + e1;
  const A h2 = -s * (nu + a) + c * b;
  const A df1 = k1 * e1;
  const A f1 = df1 - f;
  const A f2 = k2 * h2;
  const A g1 = times<T>(d1, V(df1.matrix())).array() - p * f2;
  const A g2 = times<T>(d1, V(f2.matrix())).array() + p * f1;
  const A g3 = times<T>(d1, V(p.matrix())).array() + h1 * f2 - h2 * f1;
  const A v1 = g1 / params_.gamma1();
  const A v2 = g2;
  const A om = g3 / params_.gamma3();
  const A xt = c * v1 - s * v2;
  const A yt = s * v1 + c * v2;

  if (packed) {
    packed->resize(3 * N);
    packed->segment(0, N - 1) = xt.segment(1, N - 1).matrix();
    packed->segment(N, N - 1) = yt.segment(1, N - 1).matrix();
    packed->segment(2 * N, N - 1) = om.segment(1, N - 1).matrix();
    (*packed)(N - 1) = df1(N);
    (*packed)(2 * N - 1) = f2(N);
    (*packed)(3 * N - 1) = p(N);
  }
  if constexpr (std::is_same_v<T, double>) {
    if (full) {
      full->x = xt.matrix();
      full->y = yt.matrix();
      full->theta = om.matrix();
      full->x(0) = full->y(0) = full->theta(0) = 0.0;
      full->boundary = {df1(N), f2(N), p(N)};
    }
  }
}

Eigen::VectorXd RodModel::residual(const Eigen::VectorXd& z) const {
  Eigen::VectorXd out;
  evaluate(z, &out, nullptr);
  return out;
}

Eigen::VectorXcd RodModel::residual(const Eigen::VectorXcd& z) const {
  Eigen::VectorXcd out;
  evaluate(z, &out, nullptr);
  return out;
}

TimeDerivative RodModel::derivative(const Eigen::VectorXd& z) const {
  TimeDerivative d;
  evaluate<Eigen::VectorXd>(z, nullptr, &d);
  return d;
}

Eigen::MatrixXd RodModel::jacobian(const Eigen::VectorXd& z) const {
  using Eigen::ArrayXd;
  using Eigen::MatrixXd;
  const int n = grid_.size(), N = n - 1, m = 3 * N;
  const double k1 = params_.k1(), k2 = params_.k2(), nu = params_.nu(), f = params_.force();
  const double gi1 = 1.0 / params_.gamma1(), gi3 = 1.0 / params_.gamma3();
  const MatrixXd& d1 = grid_.diff1();

  Eigen::VectorXd th = Eigen::VectorXd::Zero(n);
  th.tail(N) = z.segment(2 * N, N);
  const ArrayXd a = (d1c_ * z.segment(0, N)).array();
  const ArrayXd b = (d1c_ * z.segment(N, N)).array();
  const ArrayXd p = (d1c_ * z.segment(2 * N, N)).array();
  const ArrayXd c = th.array().cos(), s = th.array().sin();
  const ArrayXd half = (0.5 * th.array()).sin();
  const ArrayXd e1 = c * a - 2.0 * nu * half * half + s * b;
  const ArrayXd h1 = nu + e1, h2 = -s * (nu + a) + c * b;
  const ArrayXd f1 = k1 * e1 - f, f2 = k2 * h2;
  const ArrayXd v1 = ((d1 * (k1 * e1).matrix()).array() - p * f2) * gi1;
  const ArrayXd v2 = (d1 * f2.matrix()).array() + p * f1;
  const ArrayXd xt = c * v1 - s * v2, yt = s * v1 + c * v2;

  // derivatives of nodal quantities with respect to z, one row per node
  MatrixXd de1 = MatrixXd::Zero(n, m), dh2 = MatrixXd::Zero(n, m), dp = MatrixXd::Zero(n, m);
  de1.leftCols(N) = c.matrix().asDiagonal() * d1c_;
  de1.middleCols(N, N) = s.matrix().asDiagonal() * d1c_;
  dh2.leftCols(N) = -(s.matrix().asDiagonal() * d1c_);
  dh2.middleCols(N, N) = c.matrix().asDiagonal() * d1c_;
  dp.rightCols(N) = d1c_;
  for (int i = 1; i < n; ++i) {
    de1(i, 2 * N + i - 1) += h2(i);
    dh2(i, 2 * N + i - 1) -= h1(i);
  }
  const MatrixXd df1 = k1 * de1, df2 = k2 * dh2;
  const MatrixXd dv1 =
      gi1 * (d1 * df1 - f2.matrix().asDiagonal() * dp - p.matrix().asDiagonal() * df2);
  const MatrixXd dv2 = d1 * df2 + f1.matrix().asDiagonal() * dp + p.matrix().asDiagonal() * df1;
  MatrixXd dom = f2.matrix().asDiagonal() * de1 + h1.matrix().asDiagonal() * df2 -
                 f1.matrix().asDiagonal() * dh2 - h2.matrix().asDiagonal() * df1;
  dom.rightCols(N) += d2c_;
  dom *= gi3;
  MatrixXd dxt = c.matrix().asDiagonal() * dv1 - s.matrix().asDiagonal() * dv2;
  MatrixXd dyt = s.matrix().asDiagonal() * dv1 + c.matrix().asDiagonal() * dv2;
  for (int i = 1; i < n; ++i) {
    dxt(i, 2 * N + i - 1) -= yt(i);
    dyt(i, 2 * N + i - 1) += xt(i);
  }

  MatrixXd jac(m, m);
  jac.middleRows(0, N - 1) = dxt.middleRows(1, N - 1);
  jac.middleRows(N, N - 1) = dyt.middleRows(1, N - 1);
  jac.middleRows(2 * N, N - 1) = dom.middleRows(1, N - 1);
  jac.row(N - 1) = df1.row(N);
  jac.row(2 * N - 1) = df2.row(N);
  jac.row(3 * N - 1) = dp.row(N);
  return jac;
}

void RodModel::make_consistent(Eigen::VectorXd& z) const {
  const int N = nodes();
  const int idx[3] = {N - 1, 2 * N - 1, 3 * N - 1};
  for (int it = 0; it < 30; ++it) {
    const Eigen::VectorXd r = residual(z);
    Eigen::Vector3d ra;
    for (int k = 0; k < 3; ++k) ra(k) = r(idx[k]);
    const Eigen::MatrixXd j = jacobian(z);
    Eigen::Matrix3d jb;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) jb(a, b) = j(idx[a], idx[b]);
    const Eigen::Vector3d d = jb.fullPivLu().solve(-ra);
    for (int k = 0; k < 3; ++k) z(idx[k]) += d(k);
    if (d.cwiseAbs().maxCoeff() <= 1e-15 * std::max(1.0, z.cwiseAbs().maxCoeff())) return;
  }
  throw StiffnessError("could not make the initial state satisfy the free-end conditions");
}

TimeDerivative rhs(const Configuration& c, const RodParams& p, const Grid& grid) {
  const RodModel model(p, grid);
  return model.derivative(model.pack(c));
}

}  // namespace rodhopf
