#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "actuation/cmdp_solver.hpp"
#include "actuation/config.hpp"
#include "actuation/oracle.hpp"
#include "actuation/simulate.hpp"

namespace actuation {

enum class PolicyKind { via, dpp, baseline };

std::string to_string(PolicyKind kind);
PolicyKind parse_policy_kind(const std::string& name);

/// One CSV row. `method` is "exact" for stationary-chain evaluation and
/// "simulated" for Monte Carlo.
struct ResultRow {
  PolicyKind policy;
  double p_s;
  double w;
  double c_max;
  double c;
  double avg_actuation_cost;
  double avg_reconstruction_error;
  double avg_resource_cost;
  std::optional<double> z_over_t;
  std::int64_t horizon;
  std::uint64_t seed;
  double gamma;
  std::string method;
};

/// Header line shared by every CSV the tool writes.
std::string csv_header();
std::string csv_line(const ResultRow& row);
void write_csv(std::ostream& os, const std::vector<ResultRow>& rows);

/// VIA and baseline are evaluated exactly; DPP is simulated over the config
/// horizon. Rows are ordered by p_s then policy (via, dpp, baseline).
std::vector<ResultRow> run_sweep(const ScenarioConfig& cfg, unsigned workers = 0);

/// Monte Carlo rows for one policy kind across the p_s grid.
std::vector<ResultRow> run_simulations(const ScenarioConfig& cfg, PolicyKind kind,
                                       unsigned workers = 0);

/// Seed of the stream used for (policy, p_s index) under the config root seed.
std::uint64_t stream_seed(std::uint64_t root, PolicyKind kind, std::size_t p_index);

/// Solver output as text: `#` header with the bracket, eta and tolerances,
/// then one `x,x_hat,action` table per mixture component.
void write_policy_artifact(std::ostream& os, const SolveResult& result, const Model& model,
                           const SolverParams& params);

struct PolicyArtifact {
  double lambda_minus = 0.0;
  double lambda_plus = 0.0;
  double eta = 1.0;
  MixturePolicy policy;
};
PolicyArtifact read_policy_artifact(std::istream& is, int n_source);

void write_frontier_csv(std::ostream& os, const std::vector<oracle::FrontierPoint>& points,
                        double c_max);

struct CheckResult {
  std::string name;
  bool passed;
  std::string detail;
};

/// Desk-scale verification: solver against the brute-force oracle on random
/// two-state sources, DPP queue stability over 1e5 slots, and exact versus
/// Monte Carlo evaluation of the baseline.
std::vector<CheckResult> verify(const ScenarioConfig& cfg);

/// Random two-state instance used by the oracle-equivalence check.
Model random_two_state_model(std::uint64_t seed);

/// Runs `tasks` on up to `workers` threads (0 = hardware concurrency). Each
/// task writes only its own slot, so results are independent of scheduling.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& task);

}  // namespace actuation
