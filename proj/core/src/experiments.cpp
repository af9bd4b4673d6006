#include "actuation/experiments.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "actuation/baseline.hpp"
#include "actuation/errors.hpp"
#include "actuation/policy_eval.hpp"
#include "actuation/rng.hpp"
#include "actuation/text_format.hpp"

namespace actuation {

std::string to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::via: return "via";
    case PolicyKind::dpp: return "dpp";
    case PolicyKind::baseline: return "baseline";
  }
  return "unknown";
}

PolicyKind parse_policy_kind(const std::string& name) {
  if (name == "via") return PolicyKind::via;
  if (name == "dpp") return PolicyKind::dpp;
  if (name == "baseline") return PolicyKind::baseline;
  throw ConfigError("unknown policy '" + name + "' (expected via, dpp or baseline)");
}

std::string csv_header() {
  return "policy,p_s,W,c_max,c,avg_actuation_cost,avg_reconstruction_error,avg_resource_cost,"
         "z_over_t,horizon,seed,gamma,method";
}

std::string csv_line(const ResultRow& r) {
  std::string out = to_string(r.policy);
  for (double v : {r.p_s, r.w, r.c_max, r.c, r.avg_actuation_cost, r.avg_reconstruction_error,
                   r.avg_resource_cost}) {
    out += ',';
    out += format_double(v);
  }
  out += ',';
  if (r.z_over_t) out += format_double(*r.z_over_t);
  out += ',' + std::to_string(r.horizon);
  out += ',' + std::to_string(r.seed);
  out += ',' + format_double(r.gamma);
  out += ',' + r.method;
  return out;
}

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  os << csv_header() << '\n';
  for (const auto& r : rows) os << csv_line(r) << '\n';
}

void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t)>& task) {
  if (workers == 0) workers = std::max(1U, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::uint64_t stream_seed(std::uint64_t root, PolicyKind kind, std::size_t p_index) {
  return derive_seed(root, static_cast<std::uint64_t>(kind) + 1, p_index);
}

namespace {

ResultRow exact_row(PolicyKind kind, const ScenarioConfig& cfg, double ps, const EvalReport& r) {
  return ResultRow{kind, ps, cfg.w, cfg.c_max, cfg.c, r.avg_actuation_cost,
                   r.avg_reconstruction_error, r.avg_resource_cost, std::nullopt, 0, cfg.seed,
                   cfg.solver.gamma, "exact"};
}

ResultRow simulated_row(PolicyKind kind, const ScenarioConfig& cfg, double ps,
                        const SimulationReport& r) {
  return ResultRow{kind, ps, cfg.w, cfg.c_max, cfg.c, r.avg_actuation_cost,
                   r.avg_reconstruction_error, r.avg_resource_cost, r.z_over_t, r.horizon,
                   cfg.seed, cfg.solver.gamma, "simulated"};
}

InitialCondition initial_condition(const ScenarioConfig& cfg) {
  return InitialCondition{cfg.initial_state, false};
}

SimulationOptions sim_options(const ScenarioConfig& cfg, PolicyKind kind, std::size_t p_index) {
  SimulationOptions opt;
  opt.horizon = cfg.horizon;
  opt.batches = cfg.replications;
  opt.seed = stream_seed(cfg.seed, kind, p_index);
  opt.initial_source_state = cfg.initial_state;
  return opt;
}

AnyPolicy make_policy(PolicyKind kind, const ScenarioConfig& cfg, const Model& model) {
  switch (kind) {
    case PolicyKind::via: return solve_constrained(model, cfg.solver).policy;
    case PolicyKind::dpp: return DppParams::validate(cfg.w, cfg.c, cfg.c_max);
    case PolicyKind::baseline: return baseline_policy(model.n_source());
  }
  throw ConfigError("unknown policy kind");
}

}  // namespace

std::vector<ResultRow> run_sweep(const ScenarioConfig& cfg, unsigned workers) {
  constexpr PolicyKind kinds[] = {PolicyKind::via, PolicyKind::dpp, PolicyKind::baseline};
  const std::size_t n_tasks = cfg.p_s.size() * 3;
  std::vector<std::optional<ResultRow>> rows(n_tasks);
  parallel_for(n_tasks, workers, [&](std::size_t task) {
    const std::size_t p_index = task / 3;
    const PolicyKind kind = kinds[task % 3];
    const double ps = cfg.p_s[p_index];
    try {
      const Model model = cfg.model(ps);
      switch (kind) {
        case PolicyKind::via: {
          const auto solved = solve_constrained(model, cfg.solver);
          rows[task] = exact_row(kind, cfg, ps, evaluate_exact(solved.policy, model, initial_condition(cfg)));
          break;
        }
        case PolicyKind::baseline:
          rows[task] = exact_row(kind, cfg, ps,
                                 evaluate_exact(baseline_policy(model.n_source()), model,
                                                initial_condition(cfg)));
          break;
        case PolicyKind::dpp:
          rows[task] = simulated_row(kind, cfg, ps,
                                     simulate(make_policy(kind, cfg, model), model,
                                              sim_options(cfg, kind, p_index)));
          break;
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("scenario '" + cfg.name + "', policy " + to_string(kind) +
                               ", p_s=" + format_double(ps) + ": " + e.what());
    }
  });
  std::vector<ResultRow> out;
  out.reserve(n_tasks);
  for (auto& r : rows) out.push_back(std::move(*r));
  return out;
}

std::vector<ResultRow> run_simulations(const ScenarioConfig& cfg, PolicyKind kind, unsigned workers) {
  std::vector<std::optional<ResultRow>> rows(cfg.p_s.size());
  parallel_for(rows.size(), workers, [&](std::size_t p_index) {
    const double ps = cfg.p_s[p_index];
    const Model model = cfg.model(ps);
    rows[p_index] = simulated_row(
        kind, cfg, ps, simulate(make_policy(kind, cfg, model), model, sim_options(cfg, kind, p_index)));
  });
  std::vector<ResultRow> out;
  for (auto& r : rows) out.push_back(std::move(*r));
  return out;
}

void write_policy_artifact(std::ostream& os, const SolveResult& result, const Model& model,
                           const SolverParams& params) {
  os << "# actuation policy v1\n";
  os << "# n_source = " << model.n_source() << "\n";
  os << "# p_s = " << format_double(model.channel().p_s) << "\n";
  os << "# c = " << format_double(model.resource().c) << "\n";
  os << "# c_max = " << format_double(model.resource().c_max) << "\n";
  os << "# lambda_minus = " << format_double(result.lambda_minus) << "\n";
  os << "# lambda_plus = " << format_double(result.lambda_plus) << "\n";
  os << "# eta = " << format_double(result.policy.eta()) << "\n";
  os << "# gamma = " << format_double(params.gamma) << "\n";
  os << "# eps_vi = " << format_double(params.eps_vi) << "\n";
  os << "# eps_bisect = " << format_double(params.eps_bisect) << "\n";
  os << "# eta_step = " << format_double(params.eta_step) << "\n";
  os << "# avg_actuation_cost = " << format_double(result.report.avg_actuation_cost) << "\n";
  os << "# avg_resource_cost = " << format_double(result.report.avg_resource_cost) << "\n";
  auto table = [&](const char* section, const DeterministicPolicy& p) {
    os << "[" << section << "]\n";
    os << "x,x_hat,action\n";
    for (int idx = 0; idx < model.n_augmented(); ++idx) {
      const auto s = model.state(idx);
      os << s.x << ',' << s.x_hat << ',' << as_int(p(s)) << '\n';
    }
  };
  table("pi_minus", result.policy.pi_minus());
  table("pi_plus", result.policy.pi_plus());
}

PolicyArtifact read_policy_artifact(std::istream& is, int n_source) {
  const auto n_aug = static_cast<std::size_t>(n_source) * n_source;
  std::vector<Action> minus(n_aug, Action::silent), plus(n_aug, Action::silent);
  std::vector<char> seen_minus(n_aug, 0), seen_plus(n_aug, 0);
  PolicyArtifact out{0.0, 0.0, 1.0, MixturePolicy::pure(DeterministicPolicy::all_silent(n_source))};
  std::vector<Action>* current = nullptr;
  std::vector<char>* seen = nullptr;
  std::string line;
  while (std::getline(is, line)) {
    const auto body = trim(line);
    if (body.empty()) continue;
    if (body.front() == '#') {
      const auto eq = body.find('=');
      if (eq == std::string_view::npos) continue;
      const auto key = trim(body.substr(1, eq - 1));
      const auto value = body.substr(eq + 1);
      if (key == "lambda_minus") out.lambda_minus = parse_double(value);
      if (key == "lambda_plus") out.lambda_plus = parse_double(value);
      if (key == "eta") out.eta = parse_double(value);
      if (key == "n_source" && parse_integer(value) != n_source) {
        throw ConfigError("policy artifact is for a different source size");
      }
      continue;
    }
    if (body == "[pi_minus]") {
      current = &minus;
      seen = &seen_minus;
      continue;
    }
    if (body == "[pi_plus]") {
      current = &plus;
      seen = &seen_plus;
      continue;
    }
    if (body == "x,x_hat,action") continue;
    if (current == nullptr) throw ConfigError("policy row outside a section");
    std::array<long long, 3> f{};
    std::size_t pos = 0;
    for (int k = 0; k < 3; ++k) {
      const auto comma = body.find(',', pos);
      f[static_cast<std::size_t>(k)] = parse_integer(body.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
      pos = comma == std::string_view::npos ? body.size() : comma + 1;
    }
    if (f[0] < 0 || f[0] >= n_source || f[1] < 0 || f[1] >= n_source || f[2] < 0 || f[2] > 1) {
      throw ConfigError("policy row out of range: " + std::string(body));
    }
    const auto idx = static_cast<std::size_t>(f[0] * n_source + f[1]);
    (*current)[idx] = action_from(f[2] == 1);
    (*seen)[idx] = 1;
  }
  if (std::count(seen_minus.begin(), seen_minus.end(), 0) ||
      std::count(seen_plus.begin(), seen_plus.end(), 0)) {
    throw ConfigError("policy artifact does not cover every augmented state");
  }
  out.policy = MixturePolicy(DeterministicPolicy(n_source, std::move(minus)),
                             DeterministicPolicy(n_source, std::move(plus)), out.eta);
  return out;
}

void write_frontier_csv(std::ostream& os, const std::vector<oracle::FrontierPoint>& points,
                        double c_max) {
  os << "policy_id,c_bar,C_bar,feasible\n";
  for (const auto& p : points) {
    os << p.policy_id << ',' << format_double(p.c_bar) << ',' << format_double(p.C_bar) << ','
       << (p.c_bar <= c_max ? 1 : 0) << '\n';
  }
}

Model random_two_state_model(std::uint64_t seed) {
  Rng rng(seed);
  auto in = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
  Matrix p(2, 2);
  const double stay0 = in(0.05, 0.95);
  const double stay1 = in(0.05, 0.95);
  p << stay0, 1.0 - stay0, 1.0 - stay1, stay1;
  Matrix cost(2, 2);
  cost << 0.0, in(1.0, 50.0), in(1.0, 50.0), 0.0;
  const double ps = in(0.1, 1.0);
  const double c_max = in(0.02, 0.98);
  return Model(SourceModel::validate(p), CostMatrix::validate(cost), ChannelModel::validate(ps),
               ResourceConfig::validate(1.0, c_max));
}

std::vector<CheckResult> verify(const ScenarioConfig& cfg) {
  std::vector<CheckResult> out;

  {
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 20; ++i) {
      const Model model = random_two_state_model(derive_seed(cfg.seed, 0xACE, i));
      const double solver = solve_constrained(model, cfg.solver).report.avg_actuation_cost;
      const double truth = oracle::constrained_optimum(model, model.resource().c_max).value;
      worst = std::max(worst, std::abs(solver - truth) / std::max(std::abs(truth), 1e-12));
    }
    out.push_back({"oracle_equivalence_two_state", worst < 1e-3,
                   "worst relative gap " + format_double(worst) + " over 20 instances"});
  }

  {
    bool ok = true;
    double worst = 0.0;
    for (std::size_t i = 0; i < cfg.p_s.size(); ++i) {
      const Model model = cfg.model(cfg.p_s[i]);
      SimulationOptions opt = sim_options(cfg, PolicyKind::dpp, i);
      opt.horizon = 100'000;
      opt.batches = std::min<int>(cfg.replications, 100'000);
      const auto r = simulate(DppParams::validate(cfg.w, cfg.c, cfg.c_max), model, opt);
      worst = std::max(worst, *r.z_over_t);
      ok = ok && *r.z_over_t <= 0.01 && r.avg_resource_cost <= cfg.c_max + *r.z_over_t + 1e-12;
    }
    out.push_back({"dpp_rate_stability", ok, "max Z(T)/T " + format_double(worst) + " at T=1e5"});
  }

  {
    bool ok = true;
    double worst = 0.0;
    for (std::size_t i = 0; i < cfg.p_s.size(); ++i) {
      const Model model = cfg.model(cfg.p_s[i]);
      const auto policy = baseline_policy(model.n_source());
      const auto exact = evaluate_exact(policy, model, initial_condition(cfg));
      const auto mc = simulate(policy, model, sim_options(cfg, PolicyKind::baseline, i));
      auto z = [](double a, double b, double se) {
        return se > 0.0 ? std::abs(a - b) / se : (a == b ? 0.0 : INFINITY);
      };
      const double worst_here = std::max({z(exact.avg_actuation_cost, mc.avg_actuation_cost, mc.se_actuation_cost),
                                          z(exact.avg_resource_cost, mc.avg_resource_cost, mc.se_resource_cost),
                                          z(exact.avg_reconstruction_error, mc.avg_reconstruction_error,
                                            mc.se_reconstruction_error)});
      worst = std::max(worst, worst_here);
      ok = ok && worst_here <= 3.0;
    }
    out.push_back({"exact_vs_monte_carlo_baseline", ok,
                   "max deviation " + format_double(worst) + " standard errors"});
  }
  return out;
}

}  // namespace actuation
