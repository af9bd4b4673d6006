#include <gtest/gtest.h>

#include <algorithm>
#include <limits>

#include "actuation/baseline.hpp"
#include "actuation/cmdp_solver.hpp"
#include "actuation/errors.hpp"
#include "actuation/experiments.hpp"
#include "actuation/oracle.hpp"
#include "actuation/policy_eval.hpp"
#include "actuation/simulate.hpp"
#include "scenarios.hpp"

namespace actuation {
namespace {

// Exact discounted cost-to-go of a fixed table: (I - gamma P_pi)^{-1} f_pi.
Eigen::VectorXd discounted_values(const DeterministicPolicy& pi, const Model& model, double lambda,
                                  double gamma) {
  const int n = model.n_augmented();
  Matrix p = Matrix::Zero(n, n);
  Eigen::VectorXd f(n);
  for (int i = 0; i < n; ++i) {
    const SystemState s = model.state(i);
    const Action a = pi.at(i);
    f(i) = model.cost()(s.x, s.x_hat) + lambda * as_int(a) * model.resource().c;
    for (const auto& t : transition_kernel(s, a, model.source(), model.channel())) {
      p(i, model.index(t.next)) += t.prob;
    }
  }
  return (Matrix::Identity(n, n) - gamma * p).fullPivLu().solve(f);
}

TEST(LagrangianCost, Examples) {
  const auto costs = CostMatrix::validate(testing::scenario_costs());
  const auto res = ResourceConfig::validate(1.0, 0.2);
  EXPECT_EQ(lagrangian_immediate_cost({0, 2}, Action::transmit, 2.0, res, costs), 52.0);
  EXPECT_EQ(lagrangian_immediate_cost({1, 1}, Action::silent, 7.5, res, costs), 0.0);
  EXPECT_EQ(lagrangian_immediate_cost({3, 0}, Action::silent, 100.0, res, costs), 30.0);
}

TEST(ValueIteration, HugeMultiplierSilencesEverything) {
  const auto vi = value_iteration(1e6, testing::slow_model(0.9), SolverParams{});
  EXPECT_EQ(vi.policy, DeterministicPolicy::all_silent(4));
}

TEST(ValueIteration, DeadChannelSilencesEverything) {
  for (double lambda : {0.0, 0.5, 30.0}) {
    const auto vi = value_iteration(lambda, testing::fast_model(0.0), SolverParams{});
    EXPECT_EQ(vi.policy, DeterministicPolicy::all_silent(4)) << lambda;
  }
}

TEST(ValueIteration, ResidualsNonincreasing) {
  const auto vi = value_iteration(3.0, testing::slow_model(0.6), SolverParams{});
  ASSERT_GT(vi.residuals.size(), 2u);
  for (std::size_t n = 1; n < vi.residuals.size(); ++n) {
    EXPECT_LE(vi.residuals[n], vi.residuals[n - 1] + 1e-12) << n;
  }
  const SolverParams p;
  EXPECT_LT(vi.residuals.back(), p.eps_vi * (1.0 - p.gamma) / (2.0 * p.gamma));
}

TEST(ValueIteration, MatchesDiscountedBruteForce) {
  const SolverParams params;
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const Model model = random_two_state_model(seed);
    for (double lambda : {0.0, 1.0, 25.0}) {
      const auto vi = value_iteration(lambda, model, params);
      Eigen::VectorXd best = Eigen::VectorXd::Constant(4, std::numeric_limits<double>::infinity());
      oracle::enumerate_policies(model, [&](std::uint64_t, const DeterministicPolicy& pi) {
        best = best.cwiseMin(discounted_values(pi, model, lambda, params.gamma));
      });
      const Eigen::VectorXd mine = discounted_values(vi.policy, model, lambda, params.gamma);
      for (int i = 0; i < 4; ++i) {
        EXPECT_NEAR(vi.values.v[i], best(i), params.eps_vi) << seed << " " << lambda;
        EXPECT_NEAR(mine(i), best(i), params.eps_vi) << seed << " " << lambda;
      }
    }
  }
}

TEST(ValueIteration, FreeTransmissionMatchesUnconstrainedOracle) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Model model = random_two_state_model(seed).with_channel(ChannelModel::validate(1.0));
    const auto vi = value_iteration(0.0, model, SolverParams{});
    const double got = evaluate_exact(vi.policy, model).avg_actuation_cost;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& pt : oracle::frontier(model)) best = std::min(best, pt.C_bar);
    EXPECT_NEAR(got, best, 1e-6) << seed;
  }
}

TEST(ValueIteration, ScalingCostsAndPriceTogether) {
  const Model base = random_two_state_model(9);
  const double k = 3.5;
  const Model scaled(base.source(), CostMatrix::validate(base.cost().values() * k), base.channel(),
                     ResourceConfig::validate(base.resource().c * k, base.resource().c_max * k));
  const Model price_only = base.with_resource(
      ResourceConfig::validate(base.resource().c * k, base.resource().c_max * k));
  for (double lambda : {0.0, 0.7, 4.0, 12.0, 60.0}) {
    const auto ref = value_iteration(lambda, base, SolverParams{}).policy;
    EXPECT_EQ(value_iteration(lambda, scaled, SolverParams{}).policy, ref) << lambda;
    EXPECT_EQ(value_iteration(lambda / k, price_only, SolverParams{}).policy, ref) << lambda;
  }
}

TEST(ValueIteration, RejectsBadParams) {
  SolverParams p;
  p.gamma = 1.0;
  EXPECT_THROW(value_iteration(0.0, testing::slow_model(0.5), p), ModelError);
  p = {};
  p.max_vi_iters = 3;
  EXPECT_THROW(value_iteration(0.0, testing::slow_model(0.5), p), MaxItersExceeded);
}

TEST(SolveConstrained, SlowSourceMeetsBudget) {
  const Model model = testing::slow_model(0.9);
  const auto sol = solve_constrained(model);
  EXPECT_LE(sol.report.avg_resource_cost, 0.2 + 1e-9);
  EXPECT_LE(sol.lambda_plus - sol.lambda_minus, SolverParams{}.eps_bisect);
  EXPECT_GT(sol.minus_report.avg_resource_cost, 0.2);
  EXPECT_LE(sol.plus_report.avg_resource_cost, 0.2);
  // Against the true constrained optimum rather than the budget-exempt baseline.
  const double opt = oracle::constrained_optimum(model, 0.2).value;
  EXPECT_LE(sol.report.avg_actuation_cost, opt * (1.0 + 1e-2));
}

TEST(SolveConstrained, MixtureIsConvexCombination) {
  const auto sol = solve_constrained(testing::slow_model(0.7));
  const double eta = sol.policy.eta();
  ASSERT_GT(eta, 0.0);
  ASSERT_LT(eta, 1.0);
  auto mix = [&](double a, double b) { return eta * a + (1.0 - eta) * b; };
  EXPECT_NEAR(sol.report.avg_resource_cost,
              mix(sol.minus_report.avg_resource_cost, sol.plus_report.avg_resource_cost), 1e-10);
  EXPECT_NEAR(sol.report.avg_actuation_cost,
              mix(sol.minus_report.avg_actuation_cost, sol.plus_report.avg_actuation_cost), 1e-10);
  EXPECT_NEAR(sol.report.avg_reconstruction_error,
              mix(sol.minus_report.avg_reconstruction_error, sol.plus_report.avg_reconstruction_error),
              1e-10);
}

TEST(SolveConstrained, ResourceCostNonincreasingAlongBisection) {
  for (const Model& model : {testing::slow_model(0.7), testing::slow_model(0.8), testing::slow_model(0.9)}) {
    const auto sol = solve_constrained(model);
    ASSERT_FALSE(sol.unconstrained);
    auto probes = sol.probes;
    std::sort(probes.begin(), probes.end(),
              [](const LambdaProbe& a, const LambdaProbe& b) { return a.lambda < b.lambda; });
    ASSERT_GE(probes.size(), 3u);
    for (std::size_t i = 1; i < probes.size(); ++i) {
      EXPECT_LE(probes[i].avg_resource_cost, probes[i - 1].avg_resource_cost + 1e-12)
          << "lambda " << probes[i].lambda;
    }
  }
}

TEST(SolveConstrained, LooseBudgetReturnsFreePolicy) {
  const Model model = testing::slow_model(0.8, 1.0);
  const auto sol = solve_constrained(model);
  EXPECT_TRUE(sol.unconstrained);
  EXPECT_EQ(sol.policy.eta(), 1.0);
  EXPECT_EQ(sol.policy.pi_minus(), sol.policy.pi_plus());
  EXPECT_EQ(sol.policy.pi_minus(), value_iteration(0.0, model, SolverParams{}).policy);
}

TEST(SolveConstrained, DeadChannelIsAllSilent) {
  const auto sol = solve_constrained(testing::slow_model(0.0));
  EXPECT_EQ(sol.policy.pi_minus(), DeterministicPolicy::all_silent(4));
  EXPECT_EQ(sol.policy.pi_plus(), DeterministicPolicy::all_silent(4));
}

TEST(SolveConstrained, TwoStateMatchesOracle) {
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    const Model model = random_two_state_model(seed);
    const double got = solve_constrained(model).report.avg_actuation_cost;
    const double want = oracle::constrained_optimum(model, model.resource().c_max).value;
    EXPECT_LE(std::abs(got - want), 1e-3 * std::max(1.0, std::abs(want))) << seed;
  }
}

TEST(SolveConstrained, BracketFailureWhenCapTooSmall) {
  SolverParams p;
  p.lambda_hi = 1e-3;
  p.lambda_cap = 1e-2;
  EXPECT_THROW(solve_constrained(testing::slow_model(0.9), p), BracketFailure);
}

TEST(CalibrateEta, Examples) {
  EXPECT_DOUBLE_EQ(calibrate_eta(0.5, 0.1, 0.2), 0.25);
  EXPECT_EQ(calibrate_eta(0.2, 0.2, 0.2), 1.0);
  EXPECT_EQ(calibrate_eta(0.1, 0.05, 0.2), 1.0);
}

TEST(CalibrateEta, RoundsDownToGrid) {
  const double eta = calibrate_eta(0.7, 0.1, 0.2);  // exact 1/6
  EXPECT_NEAR(eta, 0.166, 1e-12);
  EXPECT_LE(eta * 0.7 + (1 - eta) * 0.1, 0.2);
  const double coarse = calibrate_eta(0.7, 0.1, 0.2, 0.05);
  EXPECT_NEAR(coarse, 0.15, 1e-12);
}

TEST(CalibrateEta, MixtureSimulationHitsBudget) {
  const Model model = testing::slow_model(0.9);
  const auto sol = solve_constrained(model);
  ASSERT_FALSE(sol.policy.degenerate());
  // 200 replications so the t = 0 component draw averages out.
  SimulationOptions opts;
  opts.horizon = 2'000'000;
  opts.batches = 200;
  opts.seed = 77;
  const auto rep = simulate(sol.policy, model, opts);
  EXPECT_LE(std::abs(rep.avg_resource_cost - 0.2), 3.0 * rep.se_resource_cost)
      << rep.avg_resource_cost << " se " << rep.se_resource_cost;
  EXPECT_LE(std::abs(rep.avg_resource_cost - sol.report.avg_resource_cost), 3.0 * rep.se_resource_cost);
}

}  // namespace
}  // namespace actuation
