#include <gtest/gtest.h>

#include <cmath>

#include "voltacell/postprocess.hpp"
#include "voltacell/simulation.hpp"
#include "voltacell/time_integrator.hpp"
#include "voltacell/verification.hpp"

using namespace voltacell;

namespace {

// d' = lambda d with no static field; stage 1 is the exact midpoint update
// for the given midpoint state.
struct Scalar {
  struct State {
    double d = 0.0;
  };
  double lambda = -1.0;
  int stage1_calls = 0;
  std::vector<double> predictions;

  State stage1(const State& prev, const State& mid, double, double dt) {
    ++stage1_calls;
    return {prev.d + dt * lambda * mid.d};
  }
  void stage2(State& cur, const State& lagged, double) {
    (void)cur;
    predictions.push_back(lagged.d);
  }
  State euler_predict(const State& prev, double, double dt) { return {prev.d + dt * lambda * prev.d}; }
  State combine(const State& a, double wa, const State& b, double wb) const {
    return {wa * a.d + wb * b.d};
  }
  double relative_update(const State& a, const State& b) const {
    return std::abs(a.d - b.d) / std::max(std::abs(b.d), 1e-300);
  }
};
static_assert(StaggeredProblem<Scalar>);

double scalar_error(double dt) {
  Scalar p;
  IntegratorOptions o;
  o.extra_fp_iters = 30;
  o.fp_tol = 1e-15;
  o.warmup_steps = 0;
  StaggeredMidpoint<Scalar> in(p, {1.0}, o);
  const int n = static_cast<int>(std::lround(1.0 / dt));
  for (int i = 0; i < n; ++i) in.step(dt);
  return std::abs(in.state().d - std::exp(-1.0));
}

}  // namespace

TEST(Integrator, SecondOrderOnScalarDecay) {
  const double e1 = scalar_error(0.1), e2 = scalar_error(0.05), e3 = scalar_error(0.025);
  EXPECT_NEAR(e1 / e2, 4.0, 0.1);
  EXPECT_NEAR(e2 / e3, 4.0, 0.05);
}

TEST(Integrator, PredictorIsExtrapolation) {
  Scalar p;
  p.lambda = 0.0;  // constant history
  IntegratorOptions o;
  o.extra_fp_iters = 0;
  o.warmup_steps = 0;
  StaggeredMidpoint<Scalar> in(p, {3.0}, o);
  in.step(0.5);
  ASSERT_TRUE(in.has_history());
  p.predictions.clear();
  in.step(0.5);
  ASSERT_EQ(p.predictions.size(), 1u);
  EXPECT_EQ(p.predictions[0], 3.0);
  Scalar q;
  q.lambda = 0.0;
  const Scalar::State a{1.0}, b{3.0};
  EXPECT_EQ(q.combine(b, 2.0, a, -1.0).d, 5.0);  // linear history 1, 3 -> 5
}

TEST(Integrator, FixedPointEarlyExit) {
  Scalar p;
  IntegratorOptions o;
  o.extra_fp_iters = 50;
  o.fp_tol = 1e-12;
  o.warmup_steps = 0;
  StaggeredMidpoint<Scalar> in(p, {1.0}, o);
  const StepInfo info = in.step(0.01);
  EXPECT_LT(info.sweeps, 50);
  EXPECT_LT(info.last_update, 1e-12);
  EXPECT_EQ(static_cast<int>(info.updates.size()), info.sweeps);
  for (std::size_t i = 1; i < info.updates.size(); ++i) EXPECT_LT(info.updates[i], info.updates[i - 1]);
}

TEST(Integrator, WarmupKeepsClock) {
  Scalar p;
  IntegratorOptions o;
  o.warmup_steps = 3;
  StaggeredMidpoint<Scalar> in(p, {1.0}, o);
  EXPECT_FALSE(in.has_history());
  in.warmup(0.1);
  EXPECT_EQ(in.time(), 0.0);
  EXPECT_TRUE(in.has_history());
  in.step(0.1);
  EXPECT_NEAR(in.time(), 0.1, 1e-15);
}

TEST(Integrator, RejectsBadInput) {
  Scalar p;
  StaggeredMidpoint<Scalar> in(p, {1.0});
  EXPECT_THROW(in.step(0.0), std::invalid_argument);
  IntegratorOptions o;
  o.extra_fp_iters = -1;
  EXPECT_THROW((StaggeredMidpoint<Scalar>(p, {1.0}, o)), std::invalid_argument);
}

TEST(Integrator, SurrogateTemporalOrder) {
  const TemporalStudy s = temporal_convergence();
  ASSERT_EQ(s.order.size(), 3u);
  EXPECT_GE(s.min_order, 1.9);
  for (double e : s.error) EXPECT_GT(e, 0.0);
}

TEST(Integrator, SurrogateExactSolutionIsConsistent) {
  LinearSurrogate p = LinearSurrogate::random(6, 3);
  Eigen::VectorXd d0 = Eigen::VectorXd::LinSpaced(6, 1.0, 2.0);
  const auto e0 = p.exact(d0, 0.0);
  EXPECT_LT((e0.d - d0).norm(), 1e-12);
  const auto c = p.consistent(d0);
  EXPECT_LT((e0.s - c.s).norm(), 1e-10);
}

namespace {

ScenarioConfig rest_config() {
  ScenarioConfig c;
  c.i_app = 0.0;
  c.mesh = MeshSpec::coarse();
  c.dt = 6.0;
  c.t_end = 60.0;
  c.write_vtk = false;
  return c;
}

}  // namespace

TEST(Integrator, WarmupPreservesEquilibrium) {
  Simulation sim(rest_config());
  sim.warmup();
  EXPECT_LT(sim.model().relative_update(sim.state(), sim.initial_state()), 1e-8);
  EXPECT_EQ(sim.time(), 0.0);
}

TEST(Integrator, WarmupRelaxesPerturbation) {
  Simulation sim(rest_config());
  BatteryModel& m = sim.model();
  SimState s = sim.initial_state();
  s.phi_e.array() += 0.01;
  const double eta0 = m.interface_report(s).max_abs_eta;
  ASSERT_NEAR(eta0, 0.01, 1e-9);
  BatteryProblem problem(m, [](double) { return 0.0; });
  IntegratorOptions o;
  o.warmup_steps = 2;
  StaggeredMidpoint<BatteryProblem> in(problem, s, o);
  in.warmup(sim.scaled().dt);
  EXPECT_LT(m.interface_report(in.state()).max_abs_eta, eta0);
}
