#include "actuation/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "actuation/errors.hpp"
#include "actuation/rng.hpp"

namespace actuation {

namespace {

// Inverse-CDF sampler over the rows of the source matrix.
class SourceSampler {
 public:
  explicit SourceSampler(const SourceModel& src) : n_(src.n_states()) {
    cdf_.resize(static_cast<std::size_t>(n_) * n_);
    last_.resize(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) {
      double acc = 0.0;
      int last = 0;
      for (int k = 0; k < n_; ++k) {
        acc += src(i, k);
        cdf_[static_cast<std::size_t>(i * n_ + k)] = acc;
        if (src(i, k) > 0.0) last = k;
      }
      last_[static_cast<std::size_t>(i)] = last;
    }
  }

  int next(int from, double u) const {
    const double* row = cdf_.data() + static_cast<std::ptrdiff_t>(from) * n_;
    const int last = last_[static_cast<std::size_t>(from)];
    for (int k = 0; k < last; ++k) {
      if (u < row[k]) return k;
    }
    return last;
  }

 private:
  int n_;
  std::vector<double> cdf_;
  std::vector<int> last_;
};

int draw_from(const std::vector<double>& pmf, double u) {
  double acc = 0.0;
  int last = 0;
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    if (pmf[k] <= 0.0) continue;
    last = static_cast<int>(k);
    acc += pmf[k];
    if (u < acc) return last;
  }
  return last;
}

struct Tally {
  double actuation = 0.0;
  std::int64_t transmissions = 0;
  std::int64_t errors = 0;
  std::int64_t slots = 0;
};

struct PathState {
  SystemState s;
  std::int64_t t = 0;
};

// Advances one slot: accounts the cost of the current state, then samples the
// next source state and channel outcome. Both uniforms are drawn every slot so
// that paths under different policies share random numbers.
inline void advance(PathState& path, Action a, const Model& model, const SourceSampler& sampler,
                    Rng& rng, Tally& tally) {
  const SystemState s = path.s;
  tally.actuation += model.cost()(s.x, s.x_hat);
  tally.transmissions += as_int(a);
  tally.errors += reconstruction_error(s);
  ++tally.slots;

  const double u_source = rng.uniform();
  const double u_channel = rng.uniform();
  const int next_x = sampler.next(s.x, u_source);
  const bool delivered = a == Action::transmit && u_channel < model.channel().p_s;
  path.s = {next_x, delivered ? s.x : s.x_hat};
  ++path.t;
}

std::vector<std::int64_t> batch_lengths(std::int64_t horizon, int batches) {
  std::vector<std::int64_t> out(static_cast<std::size_t>(batches), horizon / batches);
  for (std::int64_t i = 0; i < horizon % batches; ++i) ++out[static_cast<std::size_t>(i)];
  return out;
}

double mean_and_se(const std::vector<double>& xs, double& se) {
  const auto n = static_cast<double>(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  if (xs.size() < 2) {
    se = 0.0;
    return mean;
  }
  double ss = 0.0;
  for (double v : xs) ss += (v - mean) * (v - mean);
  se = std::sqrt(ss / (n - 1.0) / n);
  return mean;
}

SimulationReport summarize(const std::vector<Tally>& per_batch, const Model& model) {
  SimulationReport r;
  std::vector<double> act, res, err;
  Tally total;
  for (const auto& b : per_batch) {
    const auto n = static_cast<double>(b.slots);
    act.push_back(b.actuation / n);
    res.push_back(model.resource().c * static_cast<double>(b.transmissions) / n);
    err.push_back(static_cast<double>(b.errors) / n);
    total.actuation += b.actuation;
    total.transmissions += b.transmissions;
    total.errors += b.errors;
    total.slots += b.slots;
  }
  mean_and_se(act, r.se_actuation_cost);
  mean_and_se(res, r.se_resource_cost);
  mean_and_se(err, r.se_reconstruction_error);
  const auto t = static_cast<double>(total.slots);
  r.avg_actuation_cost = total.actuation / t;
  r.avg_resource_cost = model.resource().c * static_cast<double>(total.transmissions) / t;
  r.avg_reconstruction_error = static_cast<double>(total.errors) / t;
  r.horizon = total.slots;
  r.transmissions = total.transmissions;
  r.batches = static_cast<int>(per_batch.size());
  return r;
}

SystemState initial_state(const SimulationOptions& opt, const std::vector<double>& pi, Rng& rng) {
  const double u = rng.uniform();
  const int x0 = opt.initial_source_state ? *opt.initial_source_state : draw_from(pi, u);
  return {x0, x0};
}

SimulationReport run_tables(const MixturePolicy& mix, const Model& model,
                            const SimulationOptions& opt) {
  const SourceSampler sampler(model.source());
  const auto pi = stationary_distribution(model.source());
  const auto lengths = batch_lengths(opt.horizon, opt.batches);
  std::vector<Tally> tallies(lengths.size());
  std::int64_t t_global = 0;
  for (std::size_t b = 0; b < lengths.size(); ++b) {
    Rng rng(derive_seed(opt.seed, b));
    PathState path{initial_state(opt, pi, rng)};
    const bool use_minus = rng.uniform() < mix.eta();
    const DeterministicPolicy& policy = use_minus ? mix.pi_minus() : mix.pi_plus();
    for (std::int64_t k = 0; k < lengths[b]; ++k) {
      const Action a = policy(path.s);
      if (opt.on_slot) {
        opt.on_slot({t_global, path.s, a, 0.0, model.cost()(path.s.x, path.s.x_hat)});
      }
      advance(path, a, model, sampler, rng, tallies[b]);
      ++t_global;
    }
  }
  return summarize(tallies, model);
}

SimulationReport run_dpp(const DppParams& params, const Model& model,
                         const SimulationOptions& opt) {
  const SourceSampler sampler(model.source());
  const auto pi = stationary_distribution(model.source());
  const auto lengths = batch_lengths(opt.horizon, opt.batches);
  std::vector<Tally> tallies(lengths.size());
  Rng rng(derive_seed(opt.seed, 0));
  PathState path{initial_state(opt, pi, rng)};
  DppController controller(params, model);
  for (std::size_t b = 0; b < lengths.size(); ++b) {
    for (std::int64_t k = 0; k < lengths[b]; ++k) {
      const double z = controller.queue().z;
      const Action a = controller.step(path.s);
      if (opt.on_slot) opt.on_slot({path.t, path.s, a, z, model.cost()(path.s.x, path.s.x_hat)});
      advance(path, a, model, sampler, rng, tallies[b]);
    }
  }
  auto report = summarize(tallies, model);
  report.final_queue = controller.queue().z;
  report.z_over_t = controller.queue().z / static_cast<double>(opt.horizon);
  return report;
}

}  // namespace

SimulationReport simulate(const AnyPolicy& policy, const Model& model,
                          const SimulationOptions& options) {
  if (options.horizon < 1) throw ModelError("simulation horizon must be >= 1");
  if (options.batches < 1 || options.batches > options.horizon) {
    throw ModelError("batch count must lie in [1, horizon]");
  }
  if (options.initial_source_state &&
      (*options.initial_source_state < 0 || *options.initial_source_state >= model.n_source())) {
    throw ModelError("initial source state out of range");
  }
  return std::visit(
      [&](const auto& p) -> SimulationReport {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, DppParams>) {
          return run_dpp(p, model, options);
        } else if constexpr (std::is_same_v<T, MixturePolicy>) {
          return run_tables(p, model, options);
        } else {
          return run_tables(MixturePolicy::pure(p), model, options);
        }
      },
      policy);
}

}  // namespace actuation
