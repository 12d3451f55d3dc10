#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rodhopf/errors.hpp"
#include "rodhopf/sim.hpp"

using namespace rodhopf;

namespace {

constexpr double kPi = std::numbers::pi;

// Saturated tip amplitude at F = 40, n = 96, from a run with dt halved
// (period / 256).
constexpr double kAmplitudeF40 = 0.2615918;

// First cantilever shape in y with the matching rotation, scaled to tip
// deflection a.
Eigen::VectorXd bent(const RodModel& m, double a) {
  const int n = m.nodes();
  const auto& u = m.grid().nodes();
  Eigen::VectorXd z = Eigen::VectorXd::Zero(m.size());
  for (int i = 0; i < n; ++i) {
    const double s = u(i + 1);
    z(n + i) = a * (1.0 - std::cos(kPi * s / 2.0));
    z(2 * n + i) = a * kPi / 2.0 / m.params().nu() * std::sin(kPi * s / 2.0);
  }
  m.make_consistent(z);
  return z;
}

Eigen::VectorXd mirrored(const RodModel& m, const Eigen::VectorXd& z) {
  Eigen::VectorXd r = z;
  r.tail(2 * m.nodes()) *= -1.0;
  return r;
}

std::vector<double> tone(const std::vector<double>& t, double a, double w, double h2 = 0.0) {
  std::vector<double> y;
  for (double s : t) y.push_back(a * std::sin(w * s) + h2 * a * std::sin(2.0 * w * s + 0.3));
  return y;
}

std::vector<double> linspace(double t1, int n) {
  std::vector<double> t;
  for (int i = 0; i < n; ++i) t.push_back(t1 * i / (n - 1));
  return t;
}

}  // namespace

TEST(Model, BaseStateIsAFixedPoint) {
  const Grid g(96);
  const RodModel m(reference_params(40.0), g);
  const Eigen::VectorXd z = Eigen::VectorXd::Zero(m.size());
  EXPECT_LT(m.residual(z).cwiseAbs().maxCoeff(), 1e-10);

  const Configuration c = m.unpack(z);
  EXPECT_LT((c.x - m.params().nu() * g.nodes()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((m.pack(c) - z).cwiseAbs().maxCoeff(), 1e-15);

  Integrator in(reference_params(40.0), g);
  Eigen::VectorXd s = z;
  for (int k = 0; k < 10; ++k) in.step(s, 1e-4);
  EXPECT_LT(s.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Model, JacobianIsConsistentWithResidual) {
  const Grid g(48);
  const RodModel m(reference_params(40.0), g);
  const Eigen::VectorXd z = bent(m, 0.2);
  const Eigen::MatrixXd jac = m.jacobian(z);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(m.size());
  for (int i = 0; i < m.size(); ++i) v(i) = std::sin(1.7 * i + 0.4);
  const Eigen::VectorXd r0 = m.residual(z), jv = jac * v;
  auto remainder = [&](double e) { return (m.residual(Eigen::VectorXd(z + e * v)) - r0 - e * jv).norm(); };
  const double e = 1e-3;
  const double order = std::log2(remainder(e) / remainder(e / 2.0));
  EXPECT_GE(order, 1.9);
  EXPECT_LE(order, 2.1);
}

TEST(Model, ComplexResidualExtendsRealOne) {
  const Grid g(24);
  const RodModel m(reference_params(40.0), g);
  const Eigen::VectorXd z = bent(m, 0.1);
  const Eigen::VectorXcd rc = m.residual(Eigen::VectorXcd(z.cast<std::complex<double>>()));
  const Eigen::VectorXd r = m.residual(z);
  EXPECT_LT((rc.real() - r).cwiseAbs().maxCoeff(), 1e-10 * r.cwiseAbs().maxCoeff());
  EXPECT_EQ(rc.imag().cwiseAbs().maxCoeff(), 0.0);
}

TEST(Integrator, SecondOrderConvergence) {
  const Grid g(48);
  const RodParams p = reference_params(40.0);
  const double t_end = 0.01;
  auto solve = [&](int steps) {
    Integrator in(p, g);
    Eigen::VectorXd z = bent(in.model(), 0.05);
    for (int k = 0; k < steps; ++k) in.step(z, t_end / steps);
    return z;
  };
  const Eigen::VectorXd a = solve(16), b = solve(32), c = solve(64);
  const double order = std::log2((a - b).cwiseAbs().maxCoeff() / (b - c).cwiseAbs().maxCoeff());
  EXPECT_GE(order, 1.8);
  EXPECT_LE(order, 2.2);
}

TEST(Integrator, MirrorSymmetry) {
  const Grid g(48);
  const RodParams p = reference_params(40.0);
  Integrator a(p, g), b(p, g);
  Eigen::VectorXd z = bent(a.model(), 0.1);
  Eigen::VectorXd w = mirrored(a.model(), z);
  for (int k = 0; k < 200; ++k) {
    a.step(z, 2e-4);
    b.step(w, 2e-4);
  }
  EXPECT_GT(z.cwiseAbs().maxCoeff(), 1e-2);
  EXPECT_LT((mirrored(a.model(), z) - w).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Integrator, FrozenBaseJacobianFailsAtFiniteAmplitude) {
  const Grid g(96);
  const RodParams p = reference_params(40.0);
  const double h = 2.0 * kPi / 191.2 / 128.0;
  StepOptions frozen;
  frozen.policy = JacobianPolicy::frozen_base;
  Integrator f(p, g, frozen), r(p, g);
  Eigen::VectorXd zf = bent(f.model(), 0.02), zr = zf;
  bool failed = false;
  for (int k = 0; k < 400 && !failed; ++k) {
    try {
      f.step(zf, h);
    } catch (const StiffnessError&) {
      failed = true;
    }
    r.step(zr, h);
  }
  EXPECT_TRUE(failed);
  EXPECT_TRUE(zr.allFinite());
}

TEST(Integrator, AdaptiveStepMeetsTolerance) {
  const Grid g(32);
  Integrator in(reference_params(40.0), g);
  Eigen::VectorXd z = bent(in.model(), 0.05);
  const auto s = in.adaptive_step(z, 1e-3, 1e-7, 1e-12);
  EXPECT_LE(s.error, 1.0);
  EXPECT_GT(s.taken, 0.0);
  EXPECT_GT(s.suggested, 0.0);
}

TEST(Cycle, PureTone) {
  const auto t = linspace(6.0, 60001);
  const CycleEstimate c = extract_cycle(t, tone(t, 0.1, 50.0));
  EXPECT_NEAR(c.amplitude, 0.1, 1e-6);
  EXPECT_NEAR(c.frequency, 50.0, 1e-6 * 50.0);
  EXPECT_GE(c.peaks, 5);
}

TEST(Cycle, SecondHarmonicBarelyShiftsTheEstimate) {
  const auto t = linspace(6.0, 60001);
  const CycleEstimate c = extract_cycle(t, tone(t, 0.1, 50.0, 0.01));
  EXPECT_NEAR(c.amplitude, 0.1, 0.015 * 0.1);
  EXPECT_NEAR(c.frequency, 50.0, 1e-3 * 50.0);
}

TEST(Cycle, DecayToNothingIsInsufficient) {
  const auto t = linspace(2.0, 2001);
  std::vector<double> y;
  for (double s : t) y.push_back(std::exp(-5.0 * s));
  EXPECT_THROW(extract_cycle(t, y), InsufficientDataError);
}

TEST(Cycle, Saturation) {
  EXPECT_TRUE(saturated({0.1, 0.2, 0.25, 0.26, 0.26, 0.26, 0.26, 0.26, 0.26}, 1e-3, 5));
  EXPECT_FALSE(saturated({0.1, 0.2, 0.25, 0.26, 0.26, 0.26, 0.26, 0.26}, 1e-3, 5));
  EXPECT_FALSE(saturated({0.26, 0.26, 0.26, 0.26, 0.26, 0.27}, 1e-3, 5));
  EXPECT_FALSE(saturated({}, 1e-3, 5));
}

TEST(Cycle, AmplitudesPairExtrema) {
  const auto t = linspace(1.0, 4001);
  const Extrema e = find_extrema(t, tone(t, 0.5, 2.0 * kPi * 4.0));
  EXPECT_EQ(e.maxima.size(), 4u);
  EXPECT_EQ(e.minima.size(), 4u);
  for (double a : cycle_amplitudes(e)) EXPECT_NEAR(a, 0.5, 1e-6);
}

TEST(Config, JsonRoundTripAndValidation) {
  SimConfig c;
  c.params = reference_params(38.5);
  c.grid_n = 64;
  c.steps_per_period = 200;
  c.jitter = 0.1;
  c.seed = 7;
  c.shape = InitialShape::bump;
  const SimConfig d = SimConfig::from_json(c.to_json());
  EXPECT_EQ(d.to_json(), c.to_json());
  EXPECT_EQ(d.params, c.params);
  EXPECT_EQ(*d.seed, 7u);

  nlohmann::json j = c.to_json();
  j["stepz_per_period"] = 3;
  EXPECT_THROW(SimConfig::from_json(j), ValidationError);
  SimConfig bad;
  bad.jitter = 0.1;
  EXPECT_THROW(resolve(bad), ValidationError);
  bad = SimConfig{};
  bad.dt = -1.0;
  EXPECT_THROW(resolve(bad), ValidationError);
}

TEST(Run, DampedFlutterDecays) {
  SimConfig c;
  c.params = reference_params(30.0);
  const SimRecord r = run(c);
  EXPECT_EQ(r.status, RunStatus::decayed);
  EXPECT_FALSE(r.saturated);
}

TEST(Run, BelowFlutterDecaysMonotonically) {
  SimConfig c;
  c.params = reference_params(10.0);
  c.shape = InitialShape::bump;
  c.omega_estimate = 100.0;
  const SimRecord r = run(c);
  EXPECT_EQ(r.status, RunStatus::decayed);
  // after the fast modes have gone, the tip relaxes without overshoot
  const size_t start = r.tip_y.size() / 10;
  for (size_t i = start + 1; i < r.tip_y.size(); ++i)
    EXPECT_LE(std::fabs(r.tip_y[i]), std::fabs(r.tip_y[i - 1]) * (1.0 + 1e-12)) << "sample " << i;
}

TEST(Run, SaturatesAtF40) {
  SimConfig c;
  c.params = reference_params(40.0);
  const SimRecord r = run(c);
  ASSERT_EQ(r.status, RunStatus::saturated);
  EXPECT_NEAR(r.amplitude, kAmplitudeF40, 5e-4 * kAmplitudeF40);
  EXPECT_NEAR(r.frequency, 204.355, 0.05);
  // the tip oscillates symmetrically about the axis
  const CycleEstimate e = extract_cycle(r);
  EXPECT_NEAR(e.amplitude, r.amplitude, 1e-12);
  const Extrema x = find_extrema(r.times, r.tip_y);
  EXPECT_NEAR(x.maxima.back().second, -x.minima.back().second, 1e-3);
}
