#include <gtest/gtest.h>

#include "actuation/baseline.hpp"
#include "actuation/policy_eval.hpp"
#include "scenarios.hpp"

namespace actuation {
namespace {

TEST(Baseline, Examples) {
  EXPECT_EQ(baseline_decide({0, 0}), Action::silent);
  EXPECT_EQ(baseline_decide({0, 3}), Action::transmit);
  EXPECT_EQ(baseline_decide({2, 1}), Action::transmit);
}

TEST(Baseline, EqualsErrorIndicator) {
  const auto pi = baseline_policy(5);
  for (int x = 0; x < 5; ++x) {
    for (int xh = 0; xh < 5; ++xh) {
      EXPECT_EQ(as_int(baseline_decide({x, xh})), reconstruction_error({x, xh}));
      EXPECT_EQ(pi({x, xh}), baseline_decide({x, xh}));
    }
  }
  EXPECT_EQ(pi.n_transmit(), 20u);
}

TEST(Baseline, IgnoresBudget) {
  // Same table whatever the budget, and free to overspend it.
  const Model tight = testing::slow_model(0.5, 0.01);
  const auto rep = evaluate_exact(baseline_policy(4), tight);
  EXPECT_GT(rep.avg_resource_cost, tight.resource().c_max);
  // In the stationary regime it transmits exactly when it is in error.
  EXPECT_NEAR(rep.avg_resource_cost, rep.avg_reconstruction_error * tight.resource().c, 1e-12);
}

}  // namespace
}  // namespace actuation
