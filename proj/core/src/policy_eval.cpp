#include "actuation/policy_eval.hpp"

#include "actuation/errors.hpp"
#include "actuation/markov_chain.hpp"

namespace actuation {

Matrix induced_chain(const DeterministicPolicy& policy, const Model& model) {
  const int n = model.n_augmented();
  Matrix m = Matrix::Zero(n, n);
  for (int idx = 0; idx < n; ++idx) {
    const SystemState s = model.state(idx);
    for (const auto& t : transition_kernel(s, policy(s), model.source(), model.channel())) {
      m(idx, model.index(t.next)) += t.prob;
    }
  }
  return m;
}

std::vector<std::vector<int>> recurrent_classes(const DeterministicPolicy& policy,
                                                const Model& model) {
  return markov::closed_classes(induced_chain(policy, model));
}

EvalReport evaluate_exact(const DeterministicPolicy& policy, const Model& model,
                          const InitialCondition& init) {
  if (policy.n_source() != model.n_source()) {
    throw ShapeError("policy and model state spaces differ");
  }
  const Matrix m = induced_chain(policy, model);
  const auto classes = markov::closed_classes(m);
  if (init.require_unichain && classes.size() > 1) throw MultipleRecurrentClasses(classes);

  // Weight of each closed class under the synchronized start (x0, x0).
  std::vector<double> class_weight(classes.size(), 0.0);
  if (classes.size() == 1) {
    class_weight[0] = 1.0;
  } else {
    const auto absorb = markov::absorption_probabilities(m, classes);
    std::vector<double> start(static_cast<std::size_t>(model.n_source()), 0.0);
    if (init.source_state) {
      if (*init.source_state < 0 || *init.source_state >= model.n_source()) {
        throw ModelError("initial source state out of range");
      }
      start[static_cast<std::size_t>(*init.source_state)] = 1.0;
    } else {
      start = stationary_distribution(model.source());
    }
    for (int x0 = 0; x0 < model.n_source(); ++x0) {
      const auto& row = absorb[static_cast<std::size_t>(model.index({x0, x0}))];
      for (std::size_t k = 0; k < classes.size(); ++k) {
        class_weight[k] += start[static_cast<std::size_t>(x0)] * row[k];
      }
    }
  }

  EvalReport report;
  report.stationary.assign(static_cast<std::size_t>(model.n_augmented()), 0.0);
  for (std::size_t k = 0; k < classes.size(); ++k) {
    if (class_weight[k] == 0.0) continue;
    const auto mu = markov::class_stationary(m, classes[k]);
    for (std::size_t i = 0; i < mu.size(); ++i) {
      report.stationary[static_cast<std::size_t>(classes[k][i])] += class_weight[k] * mu[i];
    }
  }

  const double c = model.resource().c;
  for (int idx = 0; idx < model.n_augmented(); ++idx) {
    const double w = report.stationary[static_cast<std::size_t>(idx)];
    if (w == 0.0) continue;
    const SystemState s = model.state(idx);
    report.avg_actuation_cost += w * actuation_cost(s, model.cost());
    report.avg_resource_cost += w * c * as_int(policy(s));
    report.avg_reconstruction_error += w * reconstruction_error(s);
  }
  return report;
}

EvalReport evaluate_exact(const MixturePolicy& policy, const Model& model,
                          const InitialCondition& init) {
  const double eta = policy.eta();
  if (eta == 1.0) return evaluate_exact(policy.pi_minus(), model, init);
  if (eta == 0.0) return evaluate_exact(policy.pi_plus(), model, init);

  const auto minus = evaluate_exact(policy.pi_minus(), model, init);
  const auto plus = evaluate_exact(policy.pi_plus(), model, init);
  EvalReport out;
  out.avg_actuation_cost = eta * minus.avg_actuation_cost + (1.0 - eta) * plus.avg_actuation_cost;
  out.avg_resource_cost = eta * minus.avg_resource_cost + (1.0 - eta) * plus.avg_resource_cost;
  out.avg_reconstruction_error =
      eta * minus.avg_reconstruction_error + (1.0 - eta) * plus.avg_reconstruction_error;
  out.stationary.resize(minus.stationary.size());
  for (std::size_t i = 0; i < out.stationary.size(); ++i) {
    out.stationary[i] = eta * minus.stationary[i] + (1.0 - eta) * plus.stationary[i];
  }
  return out;
}

}  // namespace actuation
