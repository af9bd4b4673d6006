// Command line front end: validate, solve, simulate, sweep, oracle, verify.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "actuation/baseline.hpp"
#include "actuation/cmdp_solver.hpp"
#include "actuation/config.hpp"
#include "actuation/errors.hpp"
#include "actuation/experiments.hpp"
#include "actuation/oracle.hpp"
#include "actuation/policy_eval.hpp"
#include "actuation/simulate.hpp"
#include "actuation/text_format.hpp"

namespace {

using namespace actuation;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c, bool with_out = true) {
  cmd->add_option("--config", c.config, "Scenario config file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", c.seed, "Override the root seed");
  if (with_out) cmd->add_option("--out", c.out, "Output file (default: stdout)");
}

ScenarioConfig load(const Common& c) {
  auto cfg = load_config(c.config);
  if (c.seed) cfg.seed = *c.seed;
  return cfg;
}

// Writes to --out when given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw ConfigError("cannot open output '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

double pick_ps(const ScenarioConfig& cfg, std::optional<double> ps) {
  return ps ? *ps : cfg.p_s.front();
}

int run_validate(const Common& c) {
  const auto cfg = load(c);
  const auto model = cfg.model(cfg.p_s.front());
  const auto pi = stationary_distribution(model.source());
  std::cout << "scenario " << cfg.name << ": " << model.n_source() << " source states, "
            << model.n_augmented() << " augmented states, " << cfg.p_s.size() << " p_s points\n";
  std::cout << "stationary distribution:";
  for (double v : pi) std::cout << ' ' << format_double(v);
  std::cout << "\nC_max = " << format_double(model.cost().max()) << "\nok\n";
  return 0;
}

int run_solve(const Common& c, std::optional<double> ps) {
  const auto cfg = load(c);
  const auto model = cfg.model(pick_ps(cfg, ps));
  const auto result = solve_constrained(model, cfg.solver);
  Sink sink(c.out);
  write_policy_artifact(sink.stream(), result, model, cfg.solver);
  std::cerr << "eta=" << format_double(result.policy.eta())
            << " C_bar=" << format_double(result.report.avg_actuation_cost)
            << " c_bar=" << format_double(result.report.avg_resource_cost) << '\n';
  return 0;
}

int run_simulate(const Common& c, const std::string& policy, std::optional<std::int64_t> horizon,
                 const std::string& trajectory, std::optional<double> w) {
  auto cfg = load(c);
  if (horizon) cfg.horizon = *horizon;
  if (w) cfg.w = *w;
  const auto kind = parse_policy_kind(policy);
  if (!trajectory.empty()) {
    // Trajectory logging is single-point: first p_s only.
    std::ofstream log(trajectory, std::ios::binary);
    if (!log) throw ConfigError("cannot open trajectory file '" + trajectory + "'");
    log << "t,x,x_hat,action,z,cost\n";
    const auto model = cfg.model(cfg.p_s.front());
    SimulationOptions opt;
    opt.horizon = cfg.horizon;
    opt.batches = cfg.replications;
    opt.seed = stream_seed(cfg.seed, kind, 0);
    opt.initial_source_state = cfg.initial_state;
    opt.on_slot = [&](const TrajectoryRow& r) {
      log << r.t << ',' << r.state.x << ',' << r.state.x_hat << ',' << as_int(r.action) << ','
          << format_double(r.z) << ',' << format_double(r.cost) << '\n';
    };
    AnyPolicy p = kind == PolicyKind::dpp ? AnyPolicy{DppParams::validate(cfg.w, cfg.c, cfg.c_max)}
                  : kind == PolicyKind::baseline
                      ? AnyPolicy{baseline_policy(model.n_source())}
                      : AnyPolicy{solve_constrained(model, cfg.solver).policy};
    simulate(p, model, opt);
  }
  const auto rows = run_simulations(cfg, kind);
  Sink sink(c.out);
  write_csv(sink.stream(), rows);
  return 0;
}

int run_sweep_cmd(const Common& c, unsigned workers, std::optional<double> w) {
  auto cfg = load(c);
  if (w) cfg.w = *w;
  const auto rows = run_sweep(cfg, workers);
  Sink sink(c.out.empty() ? cfg.output : c.out);
  write_csv(sink.stream(), rows);
  return 0;
}

int run_oracle(const Common& c, std::optional<double> ps, const std::string& frontier_path) {
  const auto cfg = load(c);
  const auto model = cfg.model(pick_ps(cfg, ps));
  const auto points = oracle::frontier(model, InitialCondition{cfg.initial_state, false});
  const auto best = oracle::constrained_optimum(points, model.n_source(), cfg.c_max);
  if (!frontier_path.empty()) {
    std::ofstream f(frontier_path, std::ios::binary);
    if (!f) throw ConfigError("cannot open frontier file '" + frontier_path + "'");
    write_frontier_csv(f, points, cfg.c_max);
  }
  Sink sink(c.out);
  auto& os = sink.stream();
  os << "p_s,c_max,optimum,policy_minus,policy_plus,eta\n";
  os << format_double(model.channel().p_s) << ',' << format_double(cfg.c_max) << ','
     << format_double(best.value) << ',' << best.minus.policy_id << ',' << best.plus.policy_id << ','
     << format_double(best.policy.eta()) << '\n';
  return 0;
}

int run_verify(const Common& c) {
  const auto cfg = load(c);
  bool all = true;
  for (const auto& r : verify(cfg)) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
    all = all && r.passed;
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sampling and transmission policies for actuation-error cost under a budget"};
  app.require_subcommand(1);

  Common validate_opts, solve_opts, sim_opts, sweep_opts, oracle_opts, verify_opts;

  auto* validate_cmd = app.add_subcommand("validate", "Check a scenario config");
  add_common(validate_cmd, validate_opts, false);

  std::optional<double> solve_ps;
  auto* solve_cmd = app.add_subcommand("solve", "Compute the constrained-optimal mixture policy");
  add_common(solve_cmd, solve_opts);
  solve_cmd->add_option("--p-s", solve_ps, "Success probability (default: first in config)");

  std::string policy = "dpp";
  std::optional<std::int64_t> horizon;
  std::string trajectory;
  std::optional<double> sim_w;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo run of one policy over the p_s grid");
  add_common(sim_cmd, sim_opts);
  sim_cmd->add_option("--policy", policy, "via | dpp | baseline")
      ->check(CLI::IsMember({"via", "dpp", "baseline"}));
  sim_cmd->add_option("--horizon", horizon, "Override the simulated horizon");
  sim_cmd->add_option("--trajectory", trajectory, "Per-slot CSV log for the first p_s");
  sim_cmd->add_option("--W", sim_w, "Override the DPP penalty weight");

  unsigned workers = 0;
  std::optional<double> sweep_w;
  auto* sweep_cmd = app.add_subcommand("sweep", "VIA, DPP and baseline over the p_s grid");
  add_common(sweep_cmd, sweep_opts);
  sweep_cmd->add_option("--workers", workers, "Worker threads (0 = all cores)");
  sweep_cmd->add_option("--W", sweep_w, "Override the DPP penalty weight");

  std::optional<double> oracle_ps;
  std::string frontier;
  auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force constrained optimum (<= 16 augmented states)");
  add_common(oracle_cmd, oracle_opts);
  oracle_cmd->add_option("--p-s", oracle_ps, "Success probability (default: first in config)");
  oracle_cmd->add_option("--frontier", frontier, "Dump every policy's (c_bar, C_bar) as CSV");

  auto* verify_cmd = app.add_subcommand("verify", "Desk-scale verification suites");
  add_common(verify_cmd, verify_opts, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate_cmd) return run_validate(validate_opts);
    if (*solve_cmd) return run_solve(solve_opts, solve_ps);
    if (*sim_cmd) return run_simulate(sim_opts, policy, horizon, trajectory, sim_w);
    if (*sweep_cmd) return run_sweep_cmd(sweep_opts, workers, sweep_w);
    if (*oracle_cmd) return run_oracle(oracle_opts, oracle_ps, frontier);
    if (*verify_cmd) return run_verify(verify_opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
