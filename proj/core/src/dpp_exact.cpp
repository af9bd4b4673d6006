#include <algorithm>
#include <cmath>
#include <unordered_map>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "actuation/dpp_controller.hpp"
#include "actuation/errors.hpp"

namespace actuation {

namespace {

// Smallest unit u with c = n u and c_max = m u for integers n, m.
struct Lattice {
  double unit;
  long long arrival;  // c / u
  long long service;  // c_max / u
};

Lattice find_lattice(const DppParams& p) {
  if (p.c_max <= 0.0) throw ModelError("exact DPP evaluation needs c_max > 0");
  for (long long m = 1; m <= 1000; ++m) {
    const double n = p.c / p.c_max * static_cast<double>(m);
    const double rounded = std::round(n);
    if (std::abs(n - rounded) <= 1e-9 * std::max(1.0, n)) {
      return {p.c_max / static_cast<double>(m), static_cast<long long>(rounded), m};
    }
  }
  throw ModelError("c / c_max is not a ratio of small integers; Z has no finite lattice");
}

struct Solved {
  DppExactReport report;
  bool tail_ok;
};

Solved solve_truncated(const DppParams& params, const Model& model, const Lattice& lat,
                       int max_level, const std::vector<double>& start, double tail_tol,
                       std::size_t max_states) {
  const int n_aug = model.n_augmented();
  const KernelTable kernel(model);

  auto action_at = [&](int s, long long level) {
    return decide(model.state(s), VirtualQueue{static_cast<double>(level) * lat.unit}, params, model);
  };
  auto next_level = [&](long long level, Action a) {
    const long long l = std::max(level - lat.service, 0LL) + as_int(a) * lat.arrival;
    return std::min<long long>(l, max_level);
  };

  // Reachable states by BFS from the synchronized starts.
  std::unordered_map<long long, int> id;
  std::vector<long long> keys;
  auto key_of = [&](int s, long long level) { return level * n_aug + s; };
  auto visit = [&](long long key) {
    auto [it, inserted] = id.try_emplace(key, static_cast<int>(keys.size()));
    if (inserted) {
      keys.push_back(key);
      if (keys.size() > max_states) throw TooLarge("DPP lattice chain exceeds the state cap");
    }
    return it->second;
  };
  for (int x0 = 0; x0 < model.n_source(); ++x0) {
    if (start[static_cast<std::size_t>(x0)] > 0.0) visit(key_of(model.index({x0, x0}), 0));
  }
  std::vector<Eigen::Triplet<double>> trans;
  std::vector<Action> actions;
  for (std::size_t head = 0; head < keys.size(); ++head) {
    const long long key = keys[head];
    const int s = static_cast<int>(key % n_aug);
    const long long level = key / n_aug;
    const Action a = action_at(s, level);
    actions.push_back(a);
    const long long nl = next_level(level, a);
    for (const auto& e : kernel.row(s, a)) {
      const int to = visit(key_of(e.next, nl));
      trans.emplace_back(static_cast<int>(head), to, e.prob);
    }
  }

  const auto n = static_cast<Eigen::Index>(keys.size());
  // (M^T - I) mu = 0 with the equation of state 0 (a start state, Z = 0)
  // replaced by mu_0 = 1; normalised afterwards. A dense normalisation row
  // would destroy the sparsity of the factorisation.
  std::vector<Eigen::Triplet<double>> a_trip;
  a_trip.reserve(trans.size() + static_cast<std::size_t>(n));
  for (const auto& t : trans) {
    if (t.col() != 0) a_trip.emplace_back(t.col(), t.row(), t.value());
  }
  for (Eigen::Index i = 1; i < n; ++i) a_trip.emplace_back(i, i, -1.0);
  a_trip.emplace_back(0, 0, 1.0);
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(a_trip.begin(), a_trip.end());
  a.makeCompressed();

  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) throw MultipleRecurrentClasses({});
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(0) = 1.0;
  Eigen::VectorXd mu = lu.solve(b);
  mu /= mu.sum();

  Eigen::SparseMatrix<double> m(n, n);
  m.setFromTriplets(trans.begin(), trans.end());
  const double residual = (Eigen::SparseMatrix<double>(m.transpose()) * mu - mu).lpNorm<1>();
  if (!(residual < 1e-9) || mu.minCoeff() < -1e-9) {
    throw ConvergenceFailure("DPP lattice chain: stationary solve failed (residual " +
                             std::to_string(residual) + ")");
  }

  Solved out{};
  auto& r = out.report;
  r.queue_unit = lat.unit;
  r.max_level = max_level;
  r.n_states = keys.size();
  const long long tail_from = max_level - std::max(1, max_level / 10);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double w = std::max(mu(i), 0.0);
    const long long key = keys[static_cast<std::size_t>(i)];
    const SystemState s = model.state(static_cast<int>(key % n_aug));
    const long long level = key / n_aug;
    r.avg_actuation_cost += w * model.cost()(s.x, s.x_hat);
    r.avg_resource_cost += w * params.c * as_int(actions[static_cast<std::size_t>(i)]);
    r.avg_reconstruction_error += w * reconstruction_error(s);
    r.avg_queue += w * static_cast<double>(level) * lat.unit;
    if (level > tail_from) r.tail_mass += w;
  }
  out.tail_ok = r.tail_mass <= tail_tol;
  return out;
}

}  // namespace

DppExactReport evaluate_dpp_exact(const DppParams& params, const Model& model,
                                  std::optional<int> initial_source_state, double tail_tolerance,
                                  std::size_t max_states) {
  const Lattice lat = find_lattice(params);
  std::vector<double> start(static_cast<std::size_t>(model.n_source()), 0.0);
  if (initial_source_state) {
    if (*initial_source_state < 0 || *initial_source_state >= model.n_source()) {
      throw ModelError("initial source state out of range");
    }
    start[static_cast<std::size_t>(*initial_source_state)] = 1.0;
  } else {
    start = stationary_distribution(model.source());
  }

  // Transmission happens only while Z c < W (g0 - g1), so Z never exceeds
  // max_s W (g0 - g1) / c + c. Start well below that and grow until the tail
  // is negligible.
  double gain_max = 0.0;
  for (int s = 0; s < model.n_augmented(); ++s) {
    gain_max = std::max(gain_max, g_objective(model.state(s), Action::silent, model) -
                                      g_objective(model.state(s), Action::transmit, model));
  }
  const double z_bound = params.c > 0.0 ? params.w * gain_max / params.c + params.c : 0.0;
  const auto hard_cap = static_cast<int>(std::min(z_bound / lat.unit + 2.0, 1e9));
  int level = std::min(hard_cap, std::max<int>(64, static_cast<int>(8 * lat.arrival)));
  while (true) {
    auto solved = solve_truncated(params, model, lat, level, start, tail_tolerance, max_states);
    solved.report.truncated = level < hard_cap;
    if (solved.tail_ok || level >= hard_cap) return solved.report;
    level = std::min(hard_cap, level * 2);
  }
}

}  // namespace actuation
