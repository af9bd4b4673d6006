#pragma once

#include <optional>
#include <vector>

#include "actuation/policy.hpp"
#include "actuation/system_model.hpp"

namespace actuation {

/// How the long-run averages are anchored when the induced chain is reducible.
///
/// By default the system starts synchronized at (x0, x0) with x0 drawn from the
/// source's stationary law, and every recurrent class is weighted by its
/// absorption probability from that start. `source_state` pins x0 instead.
/// With `require_unichain`, a chain with several closed classes is an error.
struct InitialCondition {
  std::optional<int> source_state;
  bool require_unichain = false;
};

struct EvalReport {
  double avg_actuation_cost = 0.0;
  double avg_resource_cost = 0.0;
  double avg_reconstruction_error = 0.0;
  /// Long-run occupation over augmented states (index = x * n + x_hat).
  std::vector<double> stationary;
};

/// Augmented-state transition matrix obtained by fixing the policy's action.
Matrix induced_chain(const DeterministicPolicy& policy, const Model& model);

std::vector<std::vector<int>> recurrent_classes(const DeterministicPolicy& policy,
                                                const Model& model);

EvalReport evaluate_exact(const DeterministicPolicy& policy, const Model& model,
                          const InitialCondition& init = {});

/// Convex combination of the component reports (t = 0 mixing).
EvalReport evaluate_exact(const MixturePolicy& policy, const Model& model,
                          const InitialCondition& init = {});

}  // namespace actuation
