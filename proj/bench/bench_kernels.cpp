#include "fcesched/kernels.hpp"
#include "fcesched/eval.hpp"

#include <benchmark/benchmark.h>

using namespace fcesched;

namespace {

QuboProblem problem(std::size_t n_orders) {
    return build_qubo(planted_transition_matrix(9, 1, 50), n_orders, kDefaultPenalty,
                      kDefaultReward);
}

std::vector<double> probabilities(std::size_t n) {
    std::vector<double> p(n);
    for (std::size_t k = 0; k < n; ++k) {
        p[k] = 0.05 + 0.9 * static_cast<double>(k % 7) / 6.0;
    }
    return p;
}

void BM_BruteForceReference(benchmark::State &state) {
    const QuboProblem q = problem(2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(brute_force_reference(q));
    }
}

void BM_BruteForceScan(benchmark::State &state) {
    const QuboProblem q = problem(2);
    const Exec exec = state.range(0) ? Exec::parallel : Exec::serial;
    for (auto _ : state) {
        benchmark::DoNotOptimize(brute_force_scan(q, exec));
    }
}

void BM_SampleReference(benchmark::State &state) {
    const auto p = probabilities(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_shots_reference(p, 8192, 1));
    }
}

void BM_Sample(benchmark::State &state) {
    const auto p = probabilities(static_cast<std::size_t>(state.range(0)));
    const Exec exec = state.range(1) ? Exec::parallel : Exec::serial;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_shots(p, 8192, 1, exec));
    }
}

void BM_ShotEnergiesReference(benchmark::State &state) {
    const QuboProblem q = problem(static_cast<std::size_t>(state.range(0)));
    const ShotBatch b = sample_shots(probabilities(q.num_vars()), 8192, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(shot_energies_reference(q, b));
    }
}

void BM_ShotEnergies(benchmark::State &state) {
    const QuboProblem q = problem(static_cast<std::size_t>(state.range(0)));
    const DenseQubo dense(q);
    const ShotBatch b = sample_shots(probabilities(q.num_vars()), 8192, 1);
    const Exec exec = state.range(1) ? Exec::parallel : Exec::serial;
    for (auto _ : state) {
        benchmark::DoNotOptimize(shot_energies(dense, b, exec));
    }
}

} // namespace

BENCHMARK(BM_BruteForceReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BruteForceScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SampleReference)->Arg(18)->Arg(90)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sample)->Args({18, 0})->Args({18, 1})->Args({90, 0})->Args({90, 1})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ShotEnergiesReference)->Arg(2)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ShotEnergies)->Args({2, 0})->Args({2, 1})->Args({10, 0})->Args({10, 1})
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
