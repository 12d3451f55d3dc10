#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "rodhopf/errors.hpp"
#include "rodhopf/linear.hpp"

using namespace rodhopf;

namespace {

// Continuum eigenvalues of the transverse problem at kappa = 1e4,
// gamma3 = 1e-4, from the shooting oracle (long double matrix exponential of
// the compound system, secant on the boundary determinant).
const cplx kExactF0[2] = {{-12.3508848774131, 0.0}, {-482.392825705953, 0.0}};
const cplx kExactF10[2] = {{-26.8095383424965, 0.0}, {-343.478421432736, 0.0}};
const cplx kExactF30 = {-54.2947994117757, 145.671884063077};
const double kExactForceCrit = 37.655980545266;
const double kExactOmegaCrit = 191.209209231186;
const double kExactForceStar = 20.008020692134;
const double kExactForceCritK2 = 37.495929952191;  // k2 = 5e3
const double kExactOmegaCritK2 = 190.113553266515;

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

class Linear : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    grid_ = new Grid(96);
    hopf_ = new HopfPoint(find_hopf_threshold(reference_params(0.0), *grid_));
  }
  static void TearDownTestSuite() {
    delete grid_;
    delete hopf_;
  }
  static Grid* grid_;
  static HopfPoint* hopf_;
};

Grid* Linear::grid_ = nullptr;
HopfPoint* Linear::hopf_ = nullptr;

}  // namespace

TEST(ShootingOracle, ReproducesFrozenValues) {
  EXPECT_LT(rel(oracle::continuum_eigenvalue(reference_params(10.0), {-26.8, 0.0}), kExactF10[0]), 1e-10);
  EXPECT_LT(rel(oracle::continuum_eigenvalue(reference_params(30.0), {-54.3, 145.7}), kExactF30), 1e-10);
}

TEST_F(Linear, BelowFlutterTheLeadingPairIsReal) {
  const auto w0 = leading_eigenvalues(assemble_operator(reference_params(0.0), *grid_), 2, true);
  const auto w10 = leading_eigenvalues(assemble_operator(reference_params(10.0), *grid_), 2, true);
  for (int k = 0; k < 2; ++k) {
    EXPECT_EQ(w0[k].imag(), 0.0);
    EXPECT_EQ(w10[k].imag(), 0.0);
    EXPECT_LT(rel(w0[k], kExactF0[k]), 1e-9);
    EXPECT_LT(rel(w10[k], kExactF10[k]), 1e-9);
  }
}

TEST_F(Linear, DampedFlutterBetweenThresholds) {
  const auto w = leading_eigenvalues(assemble_operator(reference_params(30.0), *grid_), 2, true);
  EXPECT_LT(rel(w[0], kExactF30), 1e-9);
  EXPECT_GT(w[0].imag(), 0.0);
  EXPECT_EQ(w[1], std::conj(w[0]));
}

TEST_F(Linear, GrowthAboveThreshold) {
  const auto w = leading_eigenvalues(assemble_operator(reference_params(40.0), *grid_), 1, true);
  EXPECT_GT(w[0].real(), 0.0);
}

TEST_F(Linear, ThresholdsMatchContinuum) {
  EXPECT_NEAR(hopf_->force_crit, kExactForceCrit, 1e-8);
  EXPECT_NEAR(hopf_->omega_c, kExactOmegaCrit, 1e-7);
  EXPECT_NEAR(hopf_->force_star, kExactForceStar, 1e-7);
  EXPECT_LT(hopf_->force_star, hopf_->force_crit);
}

TEST_F(Linear, AnisotropicThresholdMatchesContinuum) {
  const HopfPoint hp = find_hopf_threshold(make_params(1e4, 5e3, 0.5, 1e-4, 0.0), *grid_);
  EXPECT_NEAR(hp.force_crit, kExactForceCritK2, 1e-8);
  EXPECT_NEAR(hp.omega_c, kExactOmegaCritK2, 1e-7);
}

TEST_F(Linear, ThresholdIsGridConverged) {
  const HopfPoint fine = find_hopf_threshold(reference_params(0.0), Grid(144));
  EXPECT_LT(std::fabs(fine.force_crit - hopf_->force_crit), 1e-6);
  EXPECT_LT(std::fabs(fine.omega_c - hopf_->omega_c), 1e-6 * hopf_->omega_c);
}

TEST_F(Linear, LongitudinalBlockMatchesClosedForm) {
  const RodParams p = reference_params(30.0);
  const LinearOperator op = assemble_operator(p, *grid_);
  Eigen::EigenSolver<Eigen::MatrixXd> es(op.longitudinal().cast<double>(), false);
  std::vector<double> re;
  for (int i = 0; i < es.eigenvalues().size(); ++i) re.push_back(es.eigenvalues()(i).real());
  std::sort(re.rbegin(), re.rend());
  for (int j = 0; j < 3; ++j)
    EXPECT_LT(std::fabs(re[j] / oracle::longitudinal_eigenvalue(p, j) - 1.0), 1e-9) << "mode " << j;
}

TEST_F(Linear, EigenpairsAreRefinedToRoundoff) {
  const LinearOperator op = assemble_operator(reference_params(30.0), *grid_);
  const auto pairs = leading_spectrum(op, 4);
  ASSERT_EQ(pairs.size(), 4u);
  for (const auto& e : pairs) {
    EXPECT_TRUE(e.refined);
    EXPECT_LT(e.backward_error, 1e-15);
    // direct free-end rows y' - nu theta and theta' at u = 1
    const auto [b1, b2] = op.free_end_residuals(e.mode);
    const double scale = e.mode.y.cwiseAbs().maxCoeff();
    EXPECT_LT(std::abs(b1) / scale, 1e-9);
    EXPECT_LT(std::abs(b2) / scale, 1e-7);
    EXPECT_EQ(e.mode.y(0), 0.0);
    EXPECT_EQ(e.mode.theta(0), 0.0);
  }
  for (size_t k = 1; k < pairs.size(); ++k)
    EXPECT_GE(pairs[k - 1].eigenvalue.real(), pairs[k].eigenvalue.real());
}

TEST_F(Linear, CriticalModeNormalisation) {
  const LinearOperator op = assemble_operator(reference_params(hopf_->force_crit), *grid_);
  const CriticalMode m = critical_mode(op, hopf_->omega_c);
  EXPECT_NEAR(std::abs(m.Y(95) - 1.0), 0.0, 1e-14);
  EXPECT_LT(std::fabs(m.eigenvalue.real()), 1e-6);
  EXPECT_NEAR(m.omega_c, hopf_->omega_c, 1e-8);
  EXPECT_THROW(critical_mode(assemble_operator(reference_params(30.0), *grid_)), ConsistencyError);
}

TEST_F(Linear, AdjointIsBiorthogonal) {
  const RodParams p = reference_params(hopf_->force_crit);
  const LinearOperator op = assemble_operator(p, *grid_);
  const CriticalMode m = critical_mode(op, hopf_->omega_c);
  const AdjointMode a = adjoint_mode(assemble_adjoint_operator(p, *grid_), GammaWeights::from(p));
  const GammaWeights gw = GammaWeights::from(p);

  EXPECT_LT(std::abs(a.eigenvalue - std::conj(m.eigenvalue)), 1e-8 * std::abs(m.eigenvalue));
  EXPECT_NEAR(gamma_norm(*grid_, gw, a.shape()), 1.0, 1e-12);
  const auto [r1, r2] = adjoint_boundary_residuals(a, p, *grid_);
  EXPECT_LT(std::abs(r1) / p.k2(), 1e-9);
  EXPECT_LT(std::abs(r2), 1e-9);

  const double nm = gamma_norm(*grid_, gw, m.shape());
  EXPECT_GT(std::abs(gamma_inner(*grid_, gw, a.shape(), m.shape())), 1e-3 * nm);
  for (const auto& e : leading_spectrum(op, 8)) {
    if (std::abs(e.eigenvalue - m.eigenvalue) < 1e-6 * std::abs(m.eigenvalue)) continue;
    const double ne = gamma_norm(*grid_, gw, e.mode);
    EXPECT_LT(std::abs(gamma_inner(*grid_, gw, a.shape(), e.mode)) / ne, 1e-8)
        << "mode " << e.eigenvalue;
  }
}

TEST_F(Linear, BracketFailureIsReported) {
  ThresholdOptions opt;
  opt.force_max = 15.0;
  EXPECT_THROW(find_hopf_threshold(reference_params(0.0), *grid_, opt), BracketError);
  EXPECT_THROW(leading_eigenvalues(assemble_operator(reference_params(0.0), *grid_), 0, false),
               ValidationError);
}

TEST(GammaInner, WeightsTheComponents) {
  const Grid g(16);
  ModeShape a = ModeShape::zero(16), b = ModeShape::zero(16);
  a.x.setConstant(1.0);
  a.y.setConstant(cplx(0.0, 1.0));
  a.theta.setConstant(2.0);
  b.x.setConstant(3.0);
  b.y.setConstant(1.0);
  b.theta.setConstant(1.0);
  const cplx v = gamma_inner(g, {0.5, 1.0, 0.25}, a, b);
  EXPECT_NEAR(v.real(), 1.5 + 0.5, 1e-14);
  EXPECT_NEAR(v.imag(), -1.0, 1e-14);
}
