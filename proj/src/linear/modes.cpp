#include <sstream>

#include "rodhopf/errors.hpp"
#include "rodhopf/linear.hpp"

namespace rodhopf {

namespace {

// Largest real part among eigenvalues with the requested sign of the
// imaginary part; ties go to the larger |Im|.
const EigenPair& select(const std::vector<EigenPair>& pairs, int sign) {
  const EigenPair* best = nullptr;
  for (const auto& p : pairs) {
    if (sign * p.eigenvalue.imag() <= 0) continue;
    if (!best || p.eigenvalue.real() > best->eigenvalue.real() ||
        (p.eigenvalue.real() == best->eigenvalue.real() &&
         std::abs(p.eigenvalue.imag()) > std::abs(best->eigenvalue.imag())))
      best = &p;
  }
  if (!best) throw ConsistencyError("no oscillatory eigenvalue among the leading spectrum");
  return *best;
}

}  // namespace

ModeShape CriticalMode::shape() const {
  return {Eigen::VectorXcd::Zero(Y.size()), Y, Theta};
}

ModeShape AdjointMode::shape() const {
  return {Eigen::VectorXcd::Zero(PsiY.size()), PsiY, PsiTheta};
}

CriticalMode critical_mode(const LinearOperator& op, std::optional<double> expected_omega) {
  if (op.kind() != BoundaryKind::direct) throw ValidationError("critical_mode: expected the direct operator");
  const auto pairs = leading_spectrum(op, 6);
  const EigenPair& p = select(pairs, +1);
  const double off = expected_omega ? std::abs(p.eigenvalue - cplx(0.0, *expected_omega))
                                    : std::abs(p.eigenvalue.real());
  if (off > 1e-6) {
    std::ostringstream msg;
    msg << "critical_mode: eigenvalue " << p.eigenvalue.real() << (p.eigenvalue.imag() < 0 ? "" : "+")
        << p.eigenvalue.imag() << "i is " << off << " away from the neutral value; stale threshold?";
    throw ConsistencyError(msg.str());
  }
  const int n = op.grid().size();
  const cplx scale = 1.0 / p.mode.y(n - 1);
  CriticalMode cm;
  cm.Y = p.mode.y * scale;
  cm.Theta = p.mode.theta * scale;
  cm.Y(n - 1) = 1.0;
  cm.Y(0) = cm.Theta(0) = 0.0;
  cm.eigenvalue = p.eigenvalue;
  cm.omega_c = p.eigenvalue.imag();
  cm.force_crit = op.params().force();
  return cm;
}

std::pair<cplx, cplx> adjoint_boundary_residuals(const AdjointMode& adj, const RodParams& p,
                                                 const Grid& grid) {
  const int N = grid.size() - 1;
  const Eigen::RowVectorXd d = grid.diff1().row(N);
  const cplx dy = d * adj.PsiY, dt = d * adj.PsiTheta;
  return {p.k2() * dy - p.mu() * adj.PsiTheta(N), dt + p.force() * adj.PsiY(N)};
}

AdjointMode adjoint_mode(const LinearOperator& op, const GammaWeights& gamma) {
  const LinearOperator adj_op = assemble_adjoint_operator(op.params(), op.grid());
  const auto pairs = leading_spectrum(adj_op, 6);
  const EigenPair& p = select(pairs, -1);
  const double norm = gamma_norm(op.grid(), gamma, p.mode);
  AdjointMode am;
  am.PsiY = p.mode.y / norm;
  am.PsiTheta = p.mode.theta / norm;
  am.PsiY(0) = am.PsiTheta(0) = 0.0;
  am.eigenvalue = p.eigenvalue;
  const auto [r1, r2] = adjoint_boundary_residuals(am, op.params(), op.grid());
  const double bc = std::max(std::abs(r1) / op.params().k2(), std::abs(r2));
  if (bc > 1e-4) {
    std::ostringstream msg;
    msg << "adjoint_mode: adjoint boundary residual " << bc << " exceeds 1e-4";
    throw ConsistencyError(msg.str());
  }
  return am;
}

}  // namespace rodhopf
