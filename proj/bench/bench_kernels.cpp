#include <benchmark/benchmark.h>

#include <random>

#include "fsi/lab.hpp"
#include "fsi/lab_kernels.hpp"

namespace {

using namespace fsi;

FiniteTree bench_tree(std::size_t leaves)
{
    std::mt19937_64 rng(7);
    return random_binary_tree(leaves, rng);
}

Distribution bench_distribution(const FiniteTree& t)
{
    return gen_sparse(t, 1, 11);
}

struct AtomsFixture {
    FiniteTree t;
    MaskSet atoms;
    NodeMask probe = 0;

    explicit AtomsFixture(std::size_t leaves) : t(bench_tree(leaves))
    {
        LatticeInstance inst{t, lab_interpretation(LabFamily::Leaves), {}};
        auto report = check_powerset_lattice(inst);
        for (NodeMask a : report.atom_sets())
            atoms.insert(a);
        probe = report.atom_sets().front();
    }
};

void BM_CompletionCountsSerial(benchmark::State& state)
{
    AtomsFixture fx(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(completion_counts_serial(fx.t, fx.atoms, fx.probe));
}

void BM_CompletionCountsParallel(benchmark::State& state)
{
    AtomsFixture fx(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(completion_counts_parallel(fx.t, fx.atoms, fx.probe));
}

void BM_ZoneExcessSerial(benchmark::State& state)
{
    FiniteTree t = bench_tree(static_cast<std::size_t>(state.range(0)));
    Distribution d = bench_distribution(t);
    for (auto _ : state)
        benchmark::DoNotOptimize(worst_zone_excess_serial(t, d, 1));
}

void BM_ZoneExcessParallel(benchmark::State& state)
{
    FiniteTree t = bench_tree(static_cast<std::size_t>(state.range(0)));
    Distribution d = bench_distribution(t);
    for (auto _ : state)
        benchmark::DoNotOptimize(worst_zone_excess_parallel(t, d, 1));
}

void BM_SparsityDP(benchmark::State& state)
{
    FiniteTree t = bench_tree(static_cast<std::size_t>(state.range(0)));
    Distribution d = bench_distribution(t);
    for (auto _ : state)
        benchmark::DoNotOptimize(is_k_sparse(t, d, 1).sparse);
}

} // namespace

BENCHMARK(BM_CompletionCountsSerial)->Arg(6)->Arg(8);
BENCHMARK(BM_CompletionCountsParallel)->Arg(6)->Arg(8);
BENCHMARK(BM_ZoneExcessSerial)->Arg(6)->Arg(8);
BENCHMARK(BM_ZoneExcessParallel)->Arg(6)->Arg(8);
BENCHMARK(BM_SparsityDP)->Arg(6)->Arg(8)->Arg(32);

BENCHMARK_MAIN();
