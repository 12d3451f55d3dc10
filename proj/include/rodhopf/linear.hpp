#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rodhopf/grid.hpp"
#include "rodhopf/params.hpp"

namespace rodhopf {

using cplx = std::complex<double>;
using LdCVector = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, 1>;

// Complex (x, y, theta) node values.
struct ModeShape {
  Eigen::VectorXcd x, y, theta;

  static ModeShape zero(int n);
  ModeShape conj() const;
};

enum class BoundaryKind { direct, adjoint };

struct BoundaryRow {
  int row;
  std::string condition;
};

// Linearisation about the base state on stacked (x, y, theta) node values.
// Rows at u = 0 hold the clamp, rows at u = 1 the free-end conditions, all
// other rows the dynamics. The mass vector is 1 on dynamic rows, 0 on
// boundary rows.
class LinearOperator {
 public:
  LinearOperator(const RodParams& params, const Grid& grid, BoundaryKind kind);

  const RodParams& params() const { return params_; }
  const Grid& grid() const { return grid_; }
  BoundaryKind kind() const { return kind_; }
  const LdMatrix& matrix() const { return a_; }
  const Eigen::VectorXd& mass() const { return mass_; }
  const std::vector<BoundaryRow>& boundary_rows() const { return bc_rows_; }

  // Interior dynamics after eliminating the boundary unknowns. The
  // transverse block acts on (y_1..y_{n-2}, theta_1..theta_{n-2}), the
  // longitudinal one on x_1..x_{n-2}.
  const LdMatrix& transverse() const { return t_; }
  const LdMatrix& longitudinal() const { return l_; }

  // Boundary-completed shapes from interior values.
  ModeShape expand_transverse(const LdCVector& interior) const;
  ModeShape expand_longitudinal(const LdCVector& interior) const;

  // Row-wise action of matrix() on a full shape, and max-norm residual of
  // the dynamic rows for a candidate eigenpair.
  Eigen::VectorXcd apply(const ModeShape& xi) const;
  double interior_residual(const ModeShape& xi, cplx omega) const;
  // Residuals of the two free-end conditions at u = 1 of the transverse block.
  std::pair<cplx, cplx> free_end_residuals(const ModeShape& xi) const;

 private:
  RodParams params_;
  Grid grid_;
  BoundaryKind kind_;
  LdMatrix a_;
  Eigen::VectorXd mass_;
  std::vector<BoundaryRow> bc_rows_;
  LdMatrix t_, l_;
  LdMatrix t_lift_, l_lift_;  // boundary values = lift * interior values
};

LinearOperator assemble_operator(const RodParams& params, const Grid& grid);
// Same bulk operator with the boundary conditions of the Gamma-adjoint.
LinearOperator assemble_adjoint_operator(const RodParams& params, const Grid& grid);

struct EigenPair {
  cplx eigenvalue;
  ModeShape mode;
  // |A v - w v| / (|A| |v|) in max norms on the reduced operator.
  double backward_error = 0.0;
  bool refined = false;
};

// Eigenpairs sorted by descending real part (ties: positive imaginary part
// first). Eigenvalues with modulus above 1e8 are dropped.
std::vector<EigenPair> leading_spectrum(const LinearOperator& op, int count);

// Leading transverse eigenvalues only, optionally refined. Used by sweeps.
std::vector<cplx> leading_eigenvalues(const LinearOperator& op, int count, bool refine);

struct HopfPoint {
  double force_star = 0.0;
  double force_crit = 0.0;
  double omega_c = 0.0;
};

struct ThresholdOptions {
  double force_min = 0.0;
  double force_max = 200.0;
  double scan_step = 5.0;
  double tolerance = 1e-6;
};

double find_flutter_onset(const RodParams& params_template, const Grid& grid,
                          const ThresholdOptions& opt = {});
HopfPoint find_hopf_threshold(const RodParams& params_template, const Grid& grid,
                              const ThresholdOptions& opt = {});

struct CriticalMode {
  Eigen::VectorXcd Y, Theta;
  cplx eigenvalue;
  double omega_c = 0.0;
  double force_crit = 0.0;

  ModeShape shape() const;
};

struct AdjointMode {
  Eigen::VectorXcd PsiY, PsiTheta;
  cplx eigenvalue;

  ModeShape shape() const;
};

// Eigenvector of the critical eigenvalue scaled to Y(1) = 1. Throws
// ConsistencyError when the eigenvalue is more than 1e-6 off the imaginary
// axis (or off i*expected_omega when given).
CriticalMode critical_mode(const LinearOperator& op_at_crit,
                           std::optional<double> expected_omega = std::nullopt);

// Adjoint eigenvector for the conjugate critical eigenvalue, with unit
// Gamma-norm. Throws ConsistencyError if the adjoint boundary conditions are
// violated by more than 1e-4.
AdjointMode adjoint_mode(const LinearOperator& op_at_crit, const GammaWeights& gamma);

// Residuals of k2 PsiY'(1) - mu PsiTheta(1) and PsiTheta'(1) + F PsiY(1).
std::pair<cplx, cplx> adjoint_boundary_residuals(const AdjointMode& adj, const RodParams& p,
                                                 const Grid& grid);

// Integral of psi^H Gamma xi with the grid quadrature.
cplx gamma_inner(const Grid& grid, const GammaWeights& gamma, const ModeShape& psi,
                 const ModeShape& xi);
double gamma_norm(const Grid& grid, const GammaWeights& gamma, const ModeShape& xi);

}  // namespace rodhopf
