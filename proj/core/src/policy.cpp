#include "actuation/policy.hpp"

#include <algorithm>
#include <cmath>

#include "actuation/errors.hpp"

namespace actuation {

DeterministicPolicy::DeterministicPolicy(int n_source, std::vector<Action> table)
    : n_source_(n_source), table_(std::move(table)) {
  if (n_source <= 0 || table_.size() != static_cast<std::size_t>(n_source) * n_source) {
    throw ShapeError("policy table must have one entry per augmented state");
  }
}

DeterministicPolicy DeterministicPolicy::all_silent(int n_source) {
  return from_rule(n_source, [](SystemState) { return Action::silent; });
}

DeterministicPolicy DeterministicPolicy::always_transmit(int n_source) {
  return from_rule(n_source, [](SystemState) { return Action::transmit; });
}

DeterministicPolicy DeterministicPolicy::from_bits(int n_source, std::uint64_t bits) {
  const auto n_aug = static_cast<std::size_t>(n_source) * n_source;
  if (n_aug > 64) throw TooLarge("bit-encoded policies support at most 64 augmented states");
  std::vector<Action> table(n_aug);
  for (std::size_t i = 0; i < n_aug; ++i) table[i] = action_from(((bits >> i) & 1U) != 0);
  return DeterministicPolicy(n_source, std::move(table));
}

std::size_t DeterministicPolicy::n_transmit() const noexcept {
  return static_cast<std::size_t>(
      std::count(table_.begin(), table_.end(), Action::transmit));
}

MixturePolicy::MixturePolicy(DeterministicPolicy pi_minus, DeterministicPolicy pi_plus, double eta)
    : pi_minus_(std::move(pi_minus)), pi_plus_(std::move(pi_plus)), eta_(eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw ModelError("mixture weight eta must lie in [0, 1]");
  if (pi_minus_.n_source() != pi_plus_.n_source()) {
    throw ShapeError("mixture components must share a state space");
  }
}

}  // namespace actuation
