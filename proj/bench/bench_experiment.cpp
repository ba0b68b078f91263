#include <benchmark/benchmark.h>

#include <omp.h>

#include "proxyvote/delegation.hpp"
#include "proxyvote/simulation.hpp"

using namespace proxyvote;

namespace {

ExperimentConfig bench_config(std::size_t active_size) {
    ExperimentConfig c;
    c.n = 100;
    c.k = 3;
    c.trials = 2000;
    c.active_sizes = {active_size};
    c.master_seed = 11;
    return c;
}

void BM_ExperimentSerial(benchmark::State& state) {
    const auto c = bench_config(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(run_experiment_serial(c));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.trials));
}

void BM_ExperimentParallel(benchmark::State& state) {
    const auto c = bench_config(static_cast<std::size_t>(state.range(0)));
    const int saved = omp_get_max_threads();
    omp_set_num_threads(static_cast<int>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(run_experiment(c));
    omp_set_num_threads(saved);
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.trials));
}

// One weight computation on a fixed instance, per solver.
template <WeightSolver Solver>
void BM_Weights(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    RandomStream rng(5);
    const auto net = generate_network(n, 3, rng);
    std::vector<NodeId> members;
    for (auto id : sample_without_replacement(n, n / 20 + 1, rng)) members.emplace_back(id);
    const ActiveSet active(members, n);
    PropagationConfig config;
    config.stranded_policy = StrandedPolicy::uniform_to_active;
    for (auto _ : state) {
        if constexpr (Solver == WeightSolver::exact) {
            benchmark::DoNotOptimize(compute_weights_exact(net, active, config.stranded_policy));
        } else {
            benchmark::DoNotOptimize(compute_weights_iterative(net, active, config));
        }
    }
}

}  // namespace

BENCHMARK(BM_ExperimentSerial)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExperimentParallel)
    ->ArgsProduct({{5, 20}, {1, 2, 4}})
    ->ArgNames({"size", "threads"})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();
BENCHMARK(BM_Weights<WeightSolver::iterative>)->Arg(100)->Arg(400)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Weights<WeightSolver::exact>)->Arg(100)->Arg(400)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
