#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "actuation/system_model.hpp"

namespace actuation {

/// Stationary deterministic rule: one action per augmented state (x, x_hat).
class DeterministicPolicy {
 public:
  DeterministicPolicy(int n_source, std::vector<Action> table);

  static DeterministicPolicy all_silent(int n_source);
  static DeterministicPolicy always_transmit(int n_source);

  /// Bit i of `bits` is the action of augmented state i.
  static DeterministicPolicy from_bits(int n_source, std::uint64_t bits);

  template <typename Rule>
  static DeterministicPolicy from_rule(int n_source, Rule&& rule) {
    std::vector<Action> table;
    table.reserve(static_cast<std::size_t>(n_source) * n_source);
    for (int x = 0; x < n_source; ++x) {
      for (int x_hat = 0; x_hat < n_source; ++x_hat) table.push_back(rule(SystemState{x, x_hat}));
    }
    return DeterministicPolicy(n_source, std::move(table));
  }

  Action operator()(SystemState s) const { return table_[index(s)]; }
  Action at(int index) const { return table_[static_cast<std::size_t>(index)]; }

  int n_source() const noexcept { return n_source_; }
  std::span<const Action> table() const noexcept { return table_; }
  std::size_t n_transmit() const noexcept;

  bool operator==(const DeterministicPolicy&) const = default;

 private:
  std::size_t index(SystemState s) const {
    return static_cast<std::size_t>(s.x) * static_cast<std::size_t>(n_source_) +
           static_cast<std::size_t>(s.x_hat);
  }

  int n_source_;
  std::vector<Action> table_;
};

/// Follows `pi_minus` forever with probability eta and `pi_plus` otherwise; the
/// choice is made once, before the first slot.
class MixturePolicy {
 public:
  MixturePolicy(DeterministicPolicy pi_minus, DeterministicPolicy pi_plus, double eta);

  static MixturePolicy pure(const DeterministicPolicy& policy) { return {policy, policy, 1.0}; }

  const DeterministicPolicy& pi_minus() const noexcept { return pi_minus_; }
  const DeterministicPolicy& pi_plus() const noexcept { return pi_plus_; }
  double eta() const noexcept { return eta_; }

  bool degenerate() const noexcept {
    return eta_ == 0.0 || eta_ == 1.0 || pi_minus_ == pi_plus_;
  }

 private:
  DeterministicPolicy pi_minus_;
  DeterministicPolicy pi_plus_;
  double eta_;
};

}  // namespace actuation
