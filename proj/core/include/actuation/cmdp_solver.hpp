#pragma once

#include <vector>

#include "actuation/policy.hpp"
#include "actuation/policy_eval.hpp"
#include "actuation/system_model.hpp"

namespace actuation {

struct SolverParams {
  double gamma = 0.99;        ///< discount of the inner value iteration
  double eps_vi = 1e-6;       ///< VI stops once ||V^n - V^{n-1}|| < eps_vi (1 - gamma) / (2 gamma)
  double eps_bisect = 1e-4;   ///< stop bisecting once lambda_plus - lambda_minus <= eps_bisect
  double lambda_hi = 1e3;     ///< initial upper bracket, doubled while still over budget
  double lambda_cap = 1e12;   ///< doubling limit before BracketFailure
  double eta_step = 1e-3;     ///< grid for the mixture weight
  int max_vi_iters = 10'000'000;
  int max_bisect_iters = 200;

  void validate() const;
};

struct ValueFunction {
  std::vector<double> v;  ///< indexed by augmented state
};

struct ViResult {
  DeterministicPolicy policy;
  ValueFunction values;
  int iterations = 0;
  /// ||V^n - V^{n-1}||_inf per sweep.
  std::vector<double> residuals;
};

/// C[x][x_hat] + lambda a c
double lagrangian_immediate_cost(SystemState s, Action a, double lambda,
                                 const ResourceConfig& resource, const CostMatrix& costs);

/// Discounted value iteration on the lambda-relaxed cost, from V = 0. The
/// greedy policy prefers silence on ties.
ViResult value_iteration(double lambda, const Model& model, const SolverParams& params);

/// One evaluated multiplier on the bisection path.
struct LambdaProbe {
  double lambda;
  double avg_resource_cost;
  double avg_actuation_cost;
  /// Exact long-run average of C + lambda a c under the greedy policy.
  double theta;
};

struct SolveResult {
  MixturePolicy policy;
  double lambda_minus = 0.0;
  double lambda_plus = 0.0;
  EvalReport minus_report;
  EvalReport plus_report;
  EvalReport report;  ///< mixture evaluation
  bool unconstrained = false;
  std::vector<LambdaProbe> probes;
};

/// Lagrangian relaxation + bisection on lambda + mixing of the bracketing
/// deterministic policies so that the budget is met.
SolveResult solve_constrained(const Model& model, const SolverParams& params = {});

/// Weight on the over-budget policy such that the mixture spends at most
/// c_max. The closed-form ratio is rounded down to the `eta_step` grid.
double calibrate_eta(double c_minus, double c_plus, double c_max, double eta_step = 1e-3);

}  // namespace actuation
