#include "actuation/oracle.hpp"

#include <algorithm>
#include <limits>

#include "actuation/errors.hpp"

namespace actuation::oracle {

namespace {

void require_enumerable(const Model& model) {
  if (model.n_augmented() > kMaxAugmentedStates) {
    throw TooLarge("oracle enumeration is limited to " + std::to_string(kMaxAugmentedStates) +
                   " augmented states, model has " + std::to_string(model.n_augmented()));
  }
}

// Cross product sign of (b - a) x (c - a); <= 0 means b is not below segment ac.
double cross(const FrontierPoint& a, const FrontierPoint& b, const FrontierPoint& c) {
  return (b.c_bar - a.c_bar) * (c.C_bar - a.C_bar) - (b.C_bar - a.C_bar) * (c.c_bar - a.c_bar);
}

}  // namespace

std::uint64_t policy_count(const Model& model) {
  require_enumerable(model);
  return std::uint64_t{1} << model.n_augmented();
}

void enumerate_policies(const Model& model,
                        const std::function<void(std::uint64_t, const DeterministicPolicy&)>& visit) {
  const auto count = policy_count(model);
  for (std::uint64_t id = 0; id < count; ++id) {
    visit(id, DeterministicPolicy::from_bits(model.n_source(), id));
  }
}

std::vector<FrontierPoint> frontier(const Model& model, const InitialCondition& init) {
  std::vector<FrontierPoint> points;
  points.reserve(policy_count(model));
  enumerate_policies(model, [&](std::uint64_t id, const DeterministicPolicy& policy) {
    const auto r = evaluate_exact(policy, model, init);
    points.push_back({id, r.avg_resource_cost, r.avg_actuation_cost});
  });
  return points;
}

OracleResult constrained_optimum(const Model& model, double c_max, const InitialCondition& init) {
  return constrained_optimum(frontier(model, init), model.n_source(), c_max);
}

OracleResult constrained_optimum(const std::vector<FrontierPoint>& points, int n_source,
                                 double c_max) {
  if (points.empty()) throw ModelError("empty frontier");

  // Sort by c_bar, then C_bar, then id so the hull is deterministic.
  std::vector<FrontierPoint> sorted = points;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    if (a.c_bar != b.c_bar) return a.c_bar < b.c_bar;
    if (a.C_bar != b.C_bar) return a.C_bar < b.C_bar;
    return a.policy_id < b.policy_id;
  });

  // Andrew's monotone chain, lower half; keep only the cheapest point per c_bar.
  std::vector<FrontierPoint> hull;
  for (const auto& p : sorted) {
    if (!hull.empty() && hull.back().c_bar == p.c_bar) continue;
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) <= 0.0) hull.pop_back();
    hull.push_back(p);
  }

  if (c_max < hull.front().c_bar) throw ModelError("no policy satisfies the budget");

  // The hull is convex; its minimum over c_bar <= c_max is at the unconstrained
  // minimiser when feasible, otherwise where the hull crosses c_max.
  std::size_t best = 0;
  for (std::size_t i = 1; i < hull.size(); ++i) {
    if (hull[i].C_bar < hull[best].C_bar) best = i;
  }

  auto pure = [&](const FrontierPoint& p) {
    const auto policy = DeterministicPolicy::from_bits(n_source, p.policy_id);
    return OracleResult{p.C_bar, MixturePolicy::pure(policy), p, p};
  };

  if (hull[best].c_bar <= c_max) return pure(hull[best]);

  std::size_t hi = 1;
  while (hull[hi].c_bar <= c_max) ++hi;
  const auto& lo_pt = hull[hi - 1];
  const auto& hi_pt = hull[hi];
  const double eta = (c_max - lo_pt.c_bar) / (hi_pt.c_bar - lo_pt.c_bar);
  const double value = eta * hi_pt.C_bar + (1.0 - eta) * lo_pt.C_bar;
  MixturePolicy mix(DeterministicPolicy::from_bits(n_source, hi_pt.policy_id),
                    DeterministicPolicy::from_bits(n_source, lo_pt.policy_id), eta);
  return OracleResult{value, std::move(mix), hi_pt, lo_pt};
}

}  // namespace actuation::oracle
