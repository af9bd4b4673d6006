#pragma once

#include "actuation/system_model.hpp"

namespace actuation {

/// Drift-plus-penalty controller parameters. `w` scales the penalty term.
struct DppParams {
  double w = 100.0;
  double c = 1.0;
  double c_max = 1.0;

  static DppParams validate(double w, double c, double c_max);
  static DppParams from(const ResourceConfig& resource, double w) {
    return validate(w, resource.c, resource.c_max);
  }
};

struct VirtualQueue {
  double z = 0.0;
};

/// Expected actuation cost in the next slot given the current state and action.
double g_objective(SystemState s, Action a, const Model& model);

/// argmin over a of W g(s, a) + Z (c a - c_max); ties (up to a 1e-12 relative
/// slack) go to silence.
Action decide(SystemState s, VirtualQueue q, const DppParams& params, const Model& model);

/// Z' = max(Z - c_max, 0) + a c
VirtualQueue update_queue(VirtualQueue q, Action a, const DppParams& params);

/// Worst-case per-slot constant (c^2 + c_max^2) / 2 of the drift bound.
double drift_penalty_bound(const DppParams& params) noexcept;

/// Online controller owning its virtual queue. Not thread-safe; give each
/// worker its own instance.
class DppController {
 public:
  DppController(DppParams params, const Model& model) : params_(params), model_(&model) {}

  /// Decides for slot t and advances the queue to slot t+1.
  Action step(SystemState s) {
    const Action a = decide(s, queue_, params_, *model_);
    queue_ = update_queue(queue_, a, params_);
    return a;
  }

  VirtualQueue queue() const noexcept { return queue_; }
  const DppParams& params() const noexcept { return params_; }
  void reset() noexcept { queue_ = {}; }

 private:
  DppParams params_;
  const Model* model_;
  VirtualQueue queue_{};
};

}  // namespace actuation

#include <cstdint>
#include <optional>
#include <vector>

namespace actuation {

struct DppExactReport {
  double avg_actuation_cost = 0.0;
  double avg_resource_cost = 0.0;
  double avg_reconstruction_error = 0.0;
  double avg_queue = 0.0;
  double queue_unit = 0.0;      ///< lattice spacing of Z
  int max_level = 0;            ///< highest lattice level kept
  double tail_mass = 0.0;       ///< stationary mass in the top tenth of kept levels
  bool truncated = false;       ///< false when max_level covers every reachable Z
  std::size_t n_states = 0;     ///< reachable (x, x_hat, level) states
};

/// Exact long-run averages of the drift-plus-penalty controller.
///
/// When c and c_max are integer multiples of a common unit, Z stays on a
/// lattice and (x, x_hat, Z) is a finite-state chain started at
/// (x0, x0, 0). Levels are truncated at a height whose stationary tail mass is
/// below `tail_tolerance`; the truncation doubles until that holds or
/// `max_states` is exceeded (TooLarge). Throws ModelError when c / c_max is
/// not a ratio of integers with denominator <= 1000.
DppExactReport evaluate_dpp_exact(const DppParams& params, const Model& model,
                                  std::optional<int> initial_source_state = std::nullopt,
                                  double tail_tolerance = 1e-12,
                                  std::size_t max_states = 4'000'000);

}  // namespace actuation
