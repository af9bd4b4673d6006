#include "actuation/baseline.hpp"

namespace actuation {

Action baseline_decide(SystemState s) noexcept { return action_from(s.x != s.x_hat); }

DeterministicPolicy baseline_policy(int n_source) {
  return DeterministicPolicy::from_rule(n_source, baseline_decide);
}

}  // namespace actuation
