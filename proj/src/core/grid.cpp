#include "rodhopf/grid.hpp"

#include <cmath>

#include "rodhopf/errors.hpp"

namespace rodhopf {

namespace {

const long double kPi = 3.141592653589793238462643383279502884L;

// Chebyshev points x_k = cos(k pi / N), k = 0..N, via the sine form so that
// the symmetric pairs are exact negatives.
LdVector cheb_points(int N) {
  LdVector x(N + 1);
  for (int k = 0; k <= N; ++k) x(k) = std::sin(kPi * (N - 2 * k) / (2.0L * N));
  x(0) = 1.0L;
  x(N) = -1.0L;
  return x;
}

// d/dx on the Chebyshev points with trigonometric differences and the
// negative-sum diagonal.
LdMatrix cheb_diff(int N) {
  LdMatrix d = LdMatrix::Zero(N + 1, N + 1);
  for (int i = 0; i <= N; ++i) {
    const long double ci = (i == 0 || i == N) ? 2.0L : 1.0L;
    for (int j = 0; j <= N; ++j) {
      if (i == j) continue;
      const long double cj = (j == 0 || j == N) ? 2.0L : 1.0L;
      const long double dx =
          2.0L * std::sin(kPi * (i + j) / (2.0L * N)) * std::sin(kPi * (j - i) / (2.0L * N));
      d(i, j) = (ci / cj) * (((i + j) % 2) ? -1.0L : 1.0L) / dx;
    }
  }
  for (int i = 0; i <= N; ++i) {
    long double s = 0.0L;
    for (int j = 0; j <= N; ++j)
      if (j != i) s += d(i, j);
    d(i, i) = -s;
  }
  return d;
}

// Clenshaw-Curtis weights on [-1,1].
LdVector clenshaw_curtis(int N) {
  LdVector w = LdVector::Zero(N + 1);
  LdVector v = LdVector::Ones(N - 1);
  auto theta = [&](int k) { return kPi * k / N; };
  if (N % 2 == 0) {
    w(0) = w(N) = 1.0L / (static_cast<long double>(N) * N - 1.0L);
    for (int k = 1; k < N / 2; ++k)
      for (int i = 1; i < N; ++i) v(i - 1) -= 2.0L * std::cos(2.0L * k * theta(i)) / (4.0L * k * k - 1.0L);
    for (int i = 1; i < N; ++i) v(i - 1) -= std::cos(N * theta(i)) / (static_cast<long double>(N) * N - 1.0L);
  } else {
    w(0) = w(N) = 1.0L / (static_cast<long double>(N) * N);
    for (int k = 1; k <= (N - 1) / 2; ++k)
      for (int i = 1; i < N; ++i) v(i - 1) -= 2.0L * std::cos(2.0L * k * theta(i)) / (4.0L * k * k - 1.0L);
  }
  for (int i = 1; i < N; ++i) w(i) = 2.0L * v(i - 1) / N;
  return w;
}

// Exact integral of the degree-N interpolant, in x, from x_i to 1.
LdMatrix cheb_integral_from_right(int N) {
  LdMatrix values_to_coef(N + 1, N + 1);
  for (int j = 0; j <= N; ++j) {
    for (int k = 0; k <= N; ++k) {
      long double c = std::cos(kPi * ((static_cast<long>(j) * k) % (2 * N)) / N);
      if (k == 0 || k == N) c *= 0.5L;
      values_to_coef(j, k) = 2.0L * c / N;
    }
    if (j == 0 || j == N) values_to_coef.row(j) *= 0.5L;
  }
  // antiderivative coefficients b_1..b_{N+1}; b_0 = 0
  LdMatrix anti = LdMatrix::Zero(N + 2, N + 1);
  for (int j = 1; j <= N + 1; ++j) {
    if (j - 1 <= N) anti(j, j - 1) += (j - 1 == 0 ? 2.0L : 1.0L) / (2.0L * j);
    if (j + 1 <= N) anti(j, j + 1) -= 1.0L / (2.0L * j);
  }
  LdMatrix eval(N + 1, N + 2);
  for (int i = 0; i <= N; ++i)
    for (int j = 0; j <= N + 1; ++j) eval(i, j) = std::cos(kPi * ((static_cast<long>(j) * i) % (2 * N)) / N);
  LdMatrix at_one = LdMatrix::Ones(N + 1, N + 2);
  return (at_one - eval) * anti * values_to_coef;
}

}  // namespace

Grid::Grid(int n) : n_(n) {
  if (n < 4) throw ValidationError("grid needs at least 4 nodes");
  const int N = n - 1;
  auto data = std::make_shared<Data>();
  const LdVector x = cheb_points(N);
  data->nodes_ld = (1.0L - x.array()) / 2.0L;
  data->nodes_ld(0) = 0.0L;
  data->nodes_ld(N) = 1.0L;
  // u = (1 - x)/2 so d/du = -2 d/dx
  data->d1_ld = -2.0L * cheb_diff(N);
  data->d2_ld = data->d1_ld * data->d1_ld;
  data->nodes = data->nodes_ld.cast<double>();
  data->d1 = data->d1_ld.cast<double>();
  data->d2 = data->d2_ld.cast<double>();
  data->w = (0.5L * clenshaw_curtis(N)).cast<double>();
  data->q = (0.5L * cheb_integral_from_right(N)).cast<double>();
  data_ = std::move(data);
}

}  // namespace rodhopf
