#pragma once

#include "actuation/policy.hpp"
#include "actuation/system_model.hpp"

namespace actuation {

/// Transmit whenever the receiver's estimate disagrees with the source. Ignores
/// the resource budget.
Action baseline_decide(SystemState s) noexcept;

DeterministicPolicy baseline_policy(int n_source);

}  // namespace actuation
