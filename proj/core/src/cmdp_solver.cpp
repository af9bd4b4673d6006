#include "actuation/cmdp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "actuation/errors.hpp"

namespace actuation {

void SolverParams::validate() const {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ModelError("gamma must lie in (0, 1)");
  if (!(eps_vi > 0.0) || !(eps_bisect > 0.0) || !(eta_step > 0.0 && eta_step <= 1.0)) {
    throw ModelError("solver tolerances must be > 0");
  }
  if (!(lambda_hi > 0.0) || !(lambda_cap >= lambda_hi)) {
    throw ModelError("lambda_hi must be > 0 and not exceed lambda_cap");
  }
  if (max_vi_iters < 1 || max_bisect_iters < 1) throw ModelError("iteration caps must be >= 1");
}

double lagrangian_immediate_cost(SystemState s, Action a, double lambda,
                                 const ResourceConfig& resource, const CostMatrix& costs) {
  return costs(s.x, s.x_hat) + lambda * as_int(a) * resource.c;
}

ViResult value_iteration(double lambda, const Model& model, const SolverParams& params) {
  params.validate();
  if (!(lambda >= 0.0)) throw ModelError("lambda must be >= 0");

  const KernelTable kernel(model);
  const int n = model.n_augmented();
  const double gamma = params.gamma;
  const double threshold = params.eps_vi * (1.0 - gamma) / (2.0 * gamma);

  std::vector<double> prev(static_cast<std::size_t>(n), 0.0);
  std::vector<double> next(static_cast<std::size_t>(n), 0.0);
  std::vector<double> residuals;

  auto q_value = [&](int idx, Action a, const std::vector<double>& v) {
    double expect = 0.0;
    for (const auto& e : kernel.row(idx, a)) expect += e.prob * v[static_cast<std::size_t>(e.next)];
    return lagrangian_immediate_cost(model.state(idx), a, lambda, model.resource(), model.cost()) +
           gamma * expect;
  };

  int iter = 0;
  while (true) {
    if (iter >= params.max_vi_iters) {
      throw MaxItersExceeded("value iteration exceeded " + std::to_string(params.max_vi_iters) +
                             " sweeps");
    }
    double delta = 0.0;
    for (int idx = 0; idx < n; ++idx) {
      const double v = std::min(q_value(idx, Action::silent, prev), q_value(idx, Action::transmit, prev));
      next[static_cast<std::size_t>(idx)] = v;
      delta = std::max(delta, std::abs(v - prev[static_cast<std::size_t>(idx)]));
    }
    prev.swap(next);
    residuals.push_back(delta);
    ++iter;
    if (delta < threshold) break;
  }

  std::vector<Action> table(static_cast<std::size_t>(n));
  for (int idx = 0; idx < n; ++idx) {
    const double q0 = q_value(idx, Action::silent, prev);
    const double q1 = q_value(idx, Action::transmit, prev);
    // Transmission must win by more than rounding noise.
    const double slack = 1e-12 * std::max(1.0, std::abs(q0));
    table[static_cast<std::size_t>(idx)] = action_from(q1 < q0 - slack);
  }
  return ViResult{DeterministicPolicy(model.n_source(), std::move(table)), ValueFunction{prev}, iter,
                  std::move(residuals)};
}

double calibrate_eta(double c_minus, double c_plus, double c_max, double eta_step) {
  if (c_minus <= c_max) return 1.0;
  if (c_plus > c_max) return 0.0;
  const double exact = (c_max - c_plus) / (c_minus - c_plus);
  double eta = std::floor(exact / eta_step + 1e-9) * eta_step;
  auto spend = [&](double e) { return e * c_minus + (1.0 - e) * c_plus; };
  while (eta > 0.0 && spend(eta) > c_max + 1e-12) eta = std::max(0.0, eta - eta_step);
  return std::clamp(eta, 0.0, 1.0);
}

namespace {

struct Probe {
  ViResult vi;
  EvalReport report;
};

Probe probe(double lambda, const Model& model, const SolverParams& params,
            std::vector<LambdaProbe>& trace) {
  auto vi = value_iteration(lambda, model, params);
  auto report = evaluate_exact(vi.policy, model);
  trace.push_back({lambda, report.avg_resource_cost, report.avg_actuation_cost,
                   report.avg_actuation_cost + lambda * report.avg_resource_cost});
  return Probe{std::move(vi), std::move(report)};
}

}  // namespace

SolveResult solve_constrained(const Model& model, const SolverParams& params) {
  params.validate();
  const double c_max = model.resource().c_max;
  std::vector<LambdaProbe> trace;

  auto at_zero = probe(0.0, model, params, trace);
  if (at_zero.report.avg_resource_cost <= c_max) {
    auto mix = MixturePolicy::pure(at_zero.vi.policy);
    return SolveResult{std::move(mix), 0.0, 0.0, at_zero.report, at_zero.report, at_zero.report,
                       true, std::move(trace)};
  }

  double lambda_minus = 0.0;
  Probe minus = std::move(at_zero);

  double lambda_plus = params.lambda_hi;
  Probe plus = probe(lambda_plus, model, params, trace);
  while (plus.report.avg_resource_cost > c_max) {
    lambda_minus = lambda_plus;
    minus = std::move(plus);
    lambda_plus *= 2.0;
    if (lambda_plus > params.lambda_cap) {
      throw BracketFailure("resource cost still exceeds budget at lambda = " +
                           std::to_string(lambda_minus));
    }
    plus = probe(lambda_plus, model, params, trace);
  }

  for (int it = 0; lambda_plus - lambda_minus > params.eps_bisect; ++it) {
    if (it >= params.max_bisect_iters) throw MaxItersExceeded("bisection exceeded its cap");
    const double mid = 0.5 * (lambda_minus + lambda_plus);
    auto p = probe(mid, model, params, trace);
    if (p.report.avg_resource_cost > c_max) {
      lambda_minus = mid;
      minus = std::move(p);
    } else {
      lambda_plus = mid;
      plus = std::move(p);
    }
  }

  const double eta = calibrate_eta(minus.report.avg_resource_cost, plus.report.avg_resource_cost,
                                   c_max, params.eta_step);
  MixturePolicy mix(minus.vi.policy, plus.vi.policy, eta);
  auto report = evaluate_exact(mix, model);
  return SolveResult{std::move(mix), lambda_minus, lambda_plus, std::move(minus.report),
                     std::move(plus.report), std::move(report), false, std::move(trace)};
}

}  // namespace actuation
