#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "actuation/policy.hpp"
#include "actuation/policy_eval.hpp"
#include "actuation/system_model.hpp"

// Brute-force ground truth for desk-scale instances.
namespace actuation::oracle {

/// Largest augmented state space the enumerator accepts (2^16 policies).
inline constexpr int kMaxAugmentedStates = 16;

struct FrontierPoint {
  std::uint64_t policy_id;  ///< bit i = action of augmented state i
  double c_bar;
  double C_bar;
};

std::uint64_t policy_count(const Model& model);

/// Calls `visit` once for every deterministic table, in increasing id order.
void enumerate_policies(const Model& model,
                        const std::function<void(std::uint64_t, const DeterministicPolicy&)>& visit);

/// Every policy evaluated exactly, indexed by policy id.
std::vector<FrontierPoint> frontier(const Model& model, const InitialCondition& init = {});

struct OracleResult {
  double value;           ///< constrained optimum of the average actuation cost
  MixturePolicy policy;   ///< at most two deterministic components
  FrontierPoint minus;    ///< component carrying weight eta
  FrontierPoint plus;
};

/// Constrained optimum over t = 0 mixtures of deterministic policies, from the
/// lower convex hull of the (c_bar, C_bar) points.
OracleResult constrained_optimum(const Model& model, double c_max,
                                 const InitialCondition& init = {});

/// Same, from an already computed frontier.
OracleResult constrained_optimum(const std::vector<FrontierPoint>& points, int n_source,
                                 double c_max);

}  // namespace actuation::oracle
