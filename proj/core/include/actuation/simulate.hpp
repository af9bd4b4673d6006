#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <variant>

#include "actuation/dpp_controller.hpp"
#include "actuation/policy.hpp"
#include "actuation/system_model.hpp"

namespace actuation {

using AnyPolicy = std::variant<DeterministicPolicy, MixturePolicy, DppParams>;

struct TrajectoryRow {
  std::int64_t t;
  SystemState state;
  Action action;
  double z;  ///< queue level when the decision was taken (0 for table policies)
  double cost;
};

struct SimulationOptions {
  std::int64_t horizon = 1'000'000;
  int batches = 20;
  std::uint64_t seed = 1;
  /// Synchronized start (x0, x0); x0 drawn from the source stationary law when unset.
  std::optional<int> initial_source_state;
  std::function<void(const TrajectoryRow&)> on_slot;
};

struct SimulationReport {
  double avg_actuation_cost = 0.0;
  double avg_resource_cost = 0.0;
  double avg_reconstruction_error = 0.0;
  /// Standard errors from batch means.
  double se_actuation_cost = 0.0;
  double se_resource_cost = 0.0;
  double se_reconstruction_error = 0.0;
  std::int64_t horizon = 0;
  std::int64_t transmissions = 0;
  int batches = 0;
  /// Set for drift-plus-penalty runs only.
  std::optional<double> final_queue;
  std::optional<double> z_over_t;
};

/// Monte Carlo evaluation.
///
/// Stationary policies run `batches` independent replications of about
/// horizon / batches slots, each with its own start state and, for mixtures,
/// its own component draw. The drift-plus-penalty controller runs one path of
/// `horizon` slots with Z(0) = 0 and uses contiguous batches. Results depend
/// only on the options, never on scheduling.
SimulationReport simulate(const AnyPolicy& policy, const Model& model,
                          const SimulationOptions& options);

}  // namespace actuation
