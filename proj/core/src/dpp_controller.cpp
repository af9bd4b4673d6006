#include "actuation/dpp_controller.hpp"

#include <algorithm>
#include <cmath>

#include "actuation/errors.hpp"

namespace actuation {

DppParams DppParams::validate(double w, double c, double c_max) {
  if (!(w > 0.0) || !std::isfinite(w)) throw ModelError("penalty weight W must be > 0");
  if (!(c >= 0.0) || !std::isfinite(c)) throw ModelError("per-use cost c must be >= 0");
  if (!(c_max >= 0.0) || !std::isfinite(c_max)) throw ModelError("budget c_max must be >= 0");
  return DppParams{w, c, c_max};
}

double g_objective(SystemState s, Action a, const Model& model) {
  const auto& p = model.source();
  const auto& cost = model.cost();
  const int i = s.x;
  const int j = s.x_hat;
  // Successors below i are reachable too, so the sums cover every k.
  double stale = 0.0;
  double fresh = 0.0;
  for (int k = 0; k < model.n_source(); ++k) {
    stale += cost(k, j) * p(i, k);
    fresh += cost(k, i) * p(i, k);
  }
  if (a == Action::silent) return stale;
  const double ps = model.channel().p_s;
  return stale * (1.0 - ps) + fresh * ps;
}

Action decide(SystemState s, VirtualQueue q, const DppParams& params, const Model& model) {
  const double silent = params.w * g_objective(s, Action::silent, model) + q.z * (-params.c_max);
  const double transmit =
      params.w * g_objective(s, Action::transmit, model) + q.z * (params.c - params.c_max);
  // Relative slack so queue rounding cannot break exact ties toward transmitting.
  const double slack = 1e-12 * std::max({1.0, std::abs(silent), std::abs(transmit)});
  return action_from(transmit < silent - slack);
}

VirtualQueue update_queue(VirtualQueue q, Action a, const DppParams& params) {
  return {std::max(q.z - params.c_max, 0.0) + as_int(a) * params.c};
}

double drift_penalty_bound(const DppParams& params) noexcept {
  return (params.c * params.c + params.c_max * params.c_max) / 2.0;
}

}  // namespace actuation
