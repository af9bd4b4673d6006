#include <benchmark/benchmark.h>

#include "actuation/baseline.hpp"
#include "actuation/cmdp_solver.hpp"
#include "actuation/dpp_controller.hpp"
#include "actuation/oracle.hpp"
#include "actuation/policy_eval.hpp"
#include "actuation/simulate.hpp"

namespace {

using namespace actuation;

Model slow_model(double ps) {
  Matrix p(4, 4);
  p << 0.8, 0.2, 0.0, 0.0, 0.1, 0.8, 0.1, 0.0, 0.0, 0.1, 0.8, 0.1, 0.0, 0.0, 0.2, 0.8;
  Matrix c(4, 4);
  c << 0, 10, 50, 30, 10, 0, 40, 20, 20, 10, 0, 10, 30, 20, 40, 0;
  return Model(SourceModel::validate(p), CostMatrix::validate(c), ChannelModel::validate(ps),
               ResourceConfig::validate(1.0, 0.2));
}

void BM_ValueIteration(benchmark::State& state) {
  const Model model = slow_model(0.9);
  const double lambda = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(value_iteration(lambda, model, SolverParams{}));
}
BENCHMARK(BM_ValueIteration)->Arg(0)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_SolveConstrained(benchmark::State& state) {
  const Model model = slow_model(0.9);
  for (auto _ : state) benchmark::DoNotOptimize(solve_constrained(model));
}
BENCHMARK(BM_SolveConstrained)->Unit(benchmark::kMillisecond);

void BM_EvaluateExact(benchmark::State& state) {
  const Model model = slow_model(0.6);
  const auto pi = baseline_policy(4);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_exact(pi, model));
}
BENCHMARK(BM_EvaluateExact)->Unit(benchmark::kMicrosecond);

void BM_SimulateBaseline(benchmark::State& state) {
  const Model model = slow_model(0.6);
  SimulationOptions opts;
  opts.horizon = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(simulate(baseline_policy(4), model, opts));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateBaseline)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_SimulateDpp(benchmark::State& state) {
  const Model model = slow_model(0.6);
  SimulationOptions opts;
  opts.horizon = state.range(0);
  const auto params = DppParams::from(model.resource(), 100.0);
  for (auto _ : state) benchmark::DoNotOptimize(simulate(params, model, opts));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateDpp)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_DppExact(benchmark::State& state) {
  const Model model = slow_model(0.6);
  const auto params = DppParams::from(model.resource(), static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_dpp_exact(params, model));
}
BENCHMARK(BM_DppExact)->Arg(1)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_OracleFrontier(benchmark::State& state) {
  const Model model = slow_model(0.9);
  for (auto _ : state) benchmark::DoNotOptimize(oracle::frontier(model));
}
BENCHMARK(BM_OracleFrontier)->Unit(benchmark::kMillisecond)->Iterations(2);

}  // namespace

BENCHMARK_MAIN();
