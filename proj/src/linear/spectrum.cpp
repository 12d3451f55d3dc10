#include <algorithm>
#include <sstream>

#include "rodhopf/errors.hpp"
#include "rodhopf/linear.hpp"

namespace rodhopf {

namespace {

using ldc = std::complex<long double>;

struct RawPair {
  cplx lambda;
  Eigen::VectorXcd v;
  bool transverse;
};

bool leads(cplx a, cplx b) {
  if (a.real() != b.real()) return a.real() > b.real();
  return a.imag() > b.imag();
}

// Eigenpairs of t from the inverse, which resolves the small-modulus end of
// the spectrum best.
std::vector<RawPair> dense_eigs(const LdMatrix& t, bool transverse) {
  const Eigen::MatrixXd td = t.cast<double>();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(td);
  const Eigen::MatrixXd inv = lu.inverse();
  Eigen::EigenSolver<Eigen::MatrixXd> es(inv, true);
  if (es.info() != Eigen::Success || !inv.allFinite()) {
    std::ostringstream msg;
    msg << "eigen-solver failed on a " << td.rows() << "x" << td.cols()
        << " block; reciprocal condition estimate " << lu.rcond();
    throw ComputationError(msg.str());
  }
  std::vector<RawPair> out;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const cplx m = es.eigenvalues()(k);
    if (std::abs(m) < 1e-8) continue;  // |lambda| > 1e8
    out.push_back({1.0 / m, es.eigenvectors().col(k), transverse});
  }
  return out;
}

long double inf_norm(const LdMatrix& t) { return t.cwiseAbs().rowwise().sum().maxCoeff(); }

LdCVector matvec(const LdMatrix& t, const LdCVector& v) {
  const LdVector re = t * v.real(), im = t * v.imag();
  LdCVector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = {re(i), im(i)};
  return out;
}

struct Refined {
  ldc lambda;
  LdCVector v;
  double backward_error;
  bool refined;
};

double backward_error(const LdMatrix& t, long double tnorm, ldc lambda, const LdCVector& v) {
  const LdCVector r = matvec(t, v) - lambda * v;
  return static_cast<double>(r.cwiseAbs().maxCoeff() / (tnorm * v.cwiseAbs().maxCoeff()));
}

// Newton on [(T - lambda) v; v_j - 1] with residuals in extended precision.
Refined refine(const LdMatrix& t, const Eigen::MatrixXd& td, long double tnorm, cplx lambda0,
               const Eigen::VectorXcd& v0) {
  const Eigen::Index m = v0.size();
  Eigen::Index j = 0;
  v0.cwiseAbs().maxCoeff(&j);
  LdCVector v(m);
  const cplx scale = 1.0 / v0(j);
  for (Eigen::Index i = 0; i < m; ++i) {
    const cplx z = v0(i) * scale;
    v(i) = {z.real(), z.imag()};
  }
  v(j) = 1.0L;
  ldc lambda = {lambda0.real(), lambda0.imag()};
  const Refined initial{lambda, v, backward_error(t, tnorm, lambda, v), false};
  Refined best = initial;

  Eigen::MatrixXcd jac = Eigen::MatrixXcd::Zero(m + 1, m + 1);
  jac.topLeftCorner(m, m) = td.cast<cplx>();
  jac(m, j) = 1.0;
  for (int it = 0; it < 6; ++it) {
    const LdCVector r = matvec(t, v) - lambda * v;
    const cplx lam_d(static_cast<double>(lambda.real()), static_cast<double>(lambda.imag()));
    for (Eigen::Index i = 0; i < m; ++i) {
      jac(i, i) = td(i, i) - lam_d;
      jac(i, m) = -cplx(static_cast<double>(v(i).real()), static_cast<double>(v(i).imag()));
    }
    Eigen::VectorXcd rhs(m + 1);
    for (Eigen::Index i = 0; i < m; ++i)
      rhs(i) = -cplx(static_cast<double>(r(i).real()), static_cast<double>(r(i).imag()));
    rhs(m) = 0.0;
    const Eigen::VectorXcd d = jac.partialPivLu().solve(rhs);
    if (!d.allFinite()) break;
    for (Eigen::Index i = 0; i < m; ++i) v(i) += ldc(d(i).real(), d(i).imag());
    lambda += ldc(d(m).real(), d(m).imag());
    const double be = backward_error(t, tnorm, lambda, v);
    if (be < best.backward_error) best = {lambda, v, be, true};
    if (std::abs(d(m)) <= 1e-15 * std::abs(lam_d) && d.head(m).cwiseAbs().maxCoeff() <= 1e-15) break;
  }
  // a near-defective pair can send Newton to the partner eigenvalue
  const cplx moved(static_cast<double>(best.lambda.real()) - lambda0.real(),
                   static_cast<double>(best.lambda.imag()) - lambda0.imag());
  if (std::abs(moved) > 1e-6 * std::max(1.0, std::abs(lambda0))) return initial;
  return best;
}

cplx to_d(ldc z) { return {static_cast<double>(z.real()), static_cast<double>(z.imag())}; }

std::vector<RawPair> sorted_leading(std::vector<RawPair> all, int count) {
  std::stable_sort(all.begin(), all.end(),
                   [](const RawPair& a, const RawPair& b) { return leads(a.lambda, b.lambda); });
  if (static_cast<int>(all.size()) > count) all.resize(count);
  return all;
}

// Refine the pairs with non-negative imaginary part and mirror the
// conjugates so that pairs stay exactly conjugate.
std::vector<std::pair<RawPair, Refined>> refine_all(const LinearOperator& op,
                                                    const std::vector<RawPair>& sel) {
  const LdMatrix& tt = op.transverse();
  const LdMatrix& tl = op.longitudinal();
  const Eigen::MatrixXd ttd = tt.cast<double>(), tld = tl.cast<double>();
  const long double nt = inf_norm(tt), nl = inf_norm(tl);
  std::vector<std::pair<RawPair, Refined>> out;
  std::vector<Refined> done(sel.size());
  std::vector<bool> have(sel.size(), false);
  for (size_t k = 0; k < sel.size(); ++k) {
    if (sel[k].lambda.imag() < 0) continue;
    const LdMatrix& t = sel[k].transverse ? tt : tl;
    const Eigen::MatrixXd& td = sel[k].transverse ? ttd : tld;
    done[k] = refine(t, td, sel[k].transverse ? nt : nl, sel[k].lambda, sel[k].v);
    have[k] = true;
  }
  for (size_t k = 0; k < sel.size(); ++k) {
    if (have[k]) continue;
    for (size_t q = 0; q < sel.size(); ++q) {
      if (have[q] && q != k && sel[q].transverse == sel[k].transverse &&
          sel[q].lambda == std::conj(sel[k].lambda)) {
        done[k] = {std::conj(done[q].lambda), done[q].v.conjugate(), done[q].backward_error,
                   done[q].refined};
        have[k] = true;
        break;
      }
    }
    if (!have[k]) {
      const LdMatrix& t = sel[k].transverse ? tt : tl;
      const Eigen::MatrixXd& td = sel[k].transverse ? ttd : tld;
      done[k] = refine(t, td, sel[k].transverse ? nt : nl, sel[k].lambda, sel[k].v);
    }
  }
  for (size_t k = 0; k < sel.size(); ++k) out.push_back({sel[k], done[k]});
  return out;
}

}  // namespace

std::vector<EigenPair> leading_spectrum(const LinearOperator& op, int count) {
  if (count < 1) throw ValidationError("leading_spectrum: count must be >= 1");
  std::vector<RawPair> all = dense_eigs(op.transverse(), true);
  std::vector<RawPair> lon = dense_eigs(op.longitudinal(), false);
  all.insert(all.end(), lon.begin(), lon.end());
  // one extra so that a conjugate partner at the cut is available
  const auto sel = sorted_leading(std::move(all), count + 1);
  std::vector<EigenPair> out;
  for (const auto& [raw, ref] : refine_all(op, sel)) {
    EigenPair p;
    p.eigenvalue = to_d(ref.lambda);
    p.mode = raw.transverse ? op.expand_transverse(ref.v) : op.expand_longitudinal(ref.v);
    p.backward_error = ref.backward_error;
    p.refined = ref.refined;
    out.push_back(std::move(p));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const EigenPair& a, const EigenPair& b) { return leads(a.eigenvalue, b.eigenvalue); });
  out.resize(std::min<size_t>(out.size(), count));
  return out;
}

std::vector<cplx> leading_eigenvalues(const LinearOperator& op, int count, bool refine_values) {
  if (count < 1) throw ValidationError("leading_eigenvalues: count must be >= 1");
  const auto sel = sorted_leading(dense_eigs(op.transverse(), true), count + (refine_values ? 1 : 0));
  std::vector<cplx> out;
  if (!refine_values) {
    for (const auto& r : sel) out.push_back(r.lambda);
  } else {
    for (const auto& [raw, ref] : refine_all(op, sel)) out.push_back(to_d(ref.lambda));
    std::stable_sort(out.begin(), out.end(), leads);
  }
  out.resize(std::min<size_t>(out.size(), count));
  return out;
}

cplx gamma_inner(const Grid& grid, const GammaWeights& gamma, const ModeShape& psi,
                 const ModeShape& xi) {
  const int n = grid.size();
  for (const auto* s : {&psi, &xi})
    if (s->x.size() != n || s->y.size() != n || s->theta.size() != n)
      throw ValidationError("gamma_inner: arrays do not match the grid");
  const Eigen::VectorXd& w = grid.quad_weights();
  cplx sum = 0.0;
  for (int i = 0; i < n; ++i) {
    sum += w(i) * (gamma.gamma1 * std::conj(psi.x(i)) * xi.x(i) +
                   gamma.gamma2 * std::conj(psi.y(i)) * xi.y(i) +
                   gamma.gamma3 * std::conj(psi.theta(i)) * xi.theta(i));
  }
  return sum;
}

double gamma_norm(const Grid& grid, const GammaWeights& gamma, const ModeShape& xi) {
  return std::sqrt(gamma_inner(grid, gamma, xi, xi).real());
}

}  // namespace rodhopf
