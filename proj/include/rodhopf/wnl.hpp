#pragma once

#include <utility>

#include <Eigen/Dense>

#include "rodhopf/linear.hpp"

namespace rodhopf {

// Right-hand sides of the second-order longitudinal problems
//   k1 X0'' = f0,  k1 X2'' - 2 i w g1 X2 = f2,  X(0) = 0,  X'(1) = b.
struct QuadraticForcing {
  Eigen::VectorXcd f0, f2;
  cplx b0, b2;
  Eigen::VectorXcd H2;  // Y' - nu Theta
};

QuadraticForcing quadratic_forcing(const CriticalMode& mode, const RodParams& p, const Grid& grid);

// Both solves return the collocation result after checking it against the
// closed form; a max-norm disagreement above 1e-6 (relative to max|X|, or
// absolute when X is smaller than 1) throws ConsistencyError.
Eigen::VectorXcd solve_X0(const CriticalMode& mode, const RodParams& p, const Grid& grid);
std::pair<Eigen::VectorXcd, cplx> solve_X2(const CriticalMode& mode, const RodParams& p,
                                           const Grid& grid);

Eigen::VectorXcd solve_X0_collocation(const QuadraticForcing& q, const RodParams& p, const Grid& grid);
Eigen::VectorXcd solve_X0_closed_form(const QuadraticForcing& q, const RodParams& p, const Grid& grid);
Eigen::VectorXcd solve_X2_collocation(const QuadraticForcing& q, double omega_c, const RodParams& p,
                                      const Grid& grid);
// lambda is one of the two roots of -2 i w g1 / k1; either gives the same X2.
Eigen::VectorXcd solve_X2_closed_form(const QuadraticForcing& q, cplx lambda, const RodParams& p,
                                      const Grid& grid);
cplx principal_lambda(double omega_c, const RodParams& p);

std::pair<Eigen::VectorXcd, Eigen::VectorXcd> stress_corrections(const Eigen::VectorXcd& X0,
                                                                  const Eigen::VectorXcd& X2,
                                                                  const CriticalMode& mode,
                                                                  const RodParams& p,
                                                                  const Grid& grid);

struct QuadraticCorrections {
  Eigen::VectorXcd X0, X2, P0, P2;
  cplx lambda;
};

QuadraticCorrections quadratic_corrections(const CriticalMode& mode, const RodParams& p,
                                           const Grid& grid);

enum class Formulation { automatic, isotropic, anisotropic };

// Resonant forcing split by amplitude dependence. Each column holds the
// (x, y, theta) entries of the forcing already divided by the drag weights.
struct ForcingAssembly {
  ModeShape cubic;   // coefficient of |A|^2 A
  ModeShape linear;  // coefficient of chi A
  ModeShape slow;    // coefficient of dA/dT
  Eigen::VectorXcd g1, g2, g3, g4, H2;
  double mu = 0.0;
  Formulation formulation = Formulation::automatic;
};

ForcingAssembly assemble_forcing(const CriticalMode& mode, const QuadraticCorrections& qc,
                                 const RodParams& p, const Grid& grid,
                                 Formulation f = Formulation::automatic);

struct LandauModel {
  cplx alpha, beta, normalization;
  double omega_c = 0.0;
  double force_crit = 0.0;
  double rho_abs = 0.0;  // NaN unless supercritical
  double sigma = 0.0;    // NaN unless supercritical
  double phase = 0.0;
  bool supercritical = false;

  // 2|rho|, the amplitude constant of the tip law.
  double amplitude_constant() const { return 2.0 * rho_abs; }
};

// Throws ConsistencyError if |N| < 1e-10 with the adjoint at unit norm.
LandauModel landau_coefficients(const CriticalMode& mode, const AdjointMode& adjoint,
                                const QuadraticCorrections& qc, const RodParams& p,
                                const Grid& grid, Formulation f = Formulation::automatic);

// The hand-written isotropic integrals, for cross-checking the projection.
std::pair<cplx, cplx> landau_integrals_isotropic(const CriticalMode& mode, const AdjointMode& adjoint,
                                                 const QuadraticCorrections& qc, const RodParams& p,
                                                 const Grid& grid);

struct TipPrediction {
  double amplitude = 0.0;
  double frequency = 0.0;
};

// Throws NotApplicableError unless the model is supercritical.
TipPrediction predict_tip(const LandauModel& lm, double force_tilde);

struct SolvabilityChannels {
  bool cubic = true;
  bool linear = true;
};

// |(Psi, G)| / (|N| (|alpha| + |beta|)) with dA/dT replaced by the computed
// right-hand side of the amplitude equation at |A| = chi = 1.
double solvability_residual(const CriticalMode& mode, const AdjointMode& adjoint,
                            const QuadraticCorrections& qc, const LandauModel& lm,
                            const RodParams& p, const Grid& grid, SolvabilityChannels ch = {},
                            Formulation f = Formulation::automatic);

// Threshold, modes, corrections and coefficients for a parameter template.
struct LandauAnalysis {
  HopfPoint hopf;
  RodParams params;  // at the threshold
  CriticalMode mode;
  AdjointMode adjoint;
  QuadraticCorrections corrections;
  LandauModel model;
};

LandauAnalysis analyse(const RodParams& params_template, const Grid& grid,
                       Formulation f = Formulation::automatic);

}  // namespace rodhopf
