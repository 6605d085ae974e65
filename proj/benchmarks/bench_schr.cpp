#include "schr/lyapunov.hpp"
#include "schr/presets.hpp"
#include "schr/rdsolver.hpp"
#include "schr/stability.hpp"

#include <benchmark/benchmark.h>

using namespace schr;

namespace {

Field perturbed_start(const Scenario& s, int cells)
{
    SimConfig cfg = s.config;
    cfg.grid = Grid1D(cfg.grid.length(), cells);
    cfg.perturbation_amplitude = {5.0, 2.0, 1.0, 1.0, 0.5, 0.0};
    return initial_field(cfg);
}

void BM_ReactionExtended(benchmark::State& state)
{
    const auto p = preset("extended-endemic").config.params;
    const CompartmentVector y(Model::extended, {30, 10, 3, 5, 3, 0});
    for (auto _ : state) {
        benchmark::DoNotOptimize(reaction_extended(y, p));
    }
}
BENCHMARK(BM_ReactionExtended);

void BM_StepExplicit(benchmark::State& state)
{
    const auto s = preset("extended-endemic");
    Field f = perturbed_start(s, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        f = step_explicit(f, s.config.params, 1e-4);
        benchmark::DoNotOptimize(f);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_StepExplicit)->Arg(40)->Arg(160)->Arg(640);

void BM_StepImex(benchmark::State& state)
{
    const auto s = preset("extended-endemic");
    Field f = perturbed_start(s, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        f = step_imex(f, s.config.params, 1e-2);
        benchmark::DoNotOptimize(f);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_StepImex)->Arg(40)->Arg(160)->Arg(640);

void BM_PresetRun(benchmark::State& state)
{
    SimConfig cfg = preset("basic-endemic").config;
    for (auto _ : state) {
        benchmark::DoNotOptimize(integrate(cfg));
    }
}
BENCHMARK(BM_PresetRun)->Unit(benchmark::kMillisecond);

void BM_ClassifyExtended(benchmark::State& state)
{
    const auto p = preset("extended-endemic").config.params;
    const auto e = endemic_equilibrium_extended(p);
    const auto modes = neumann_modes(2.0, kDefaultModeCount);
    for (auto _ : state) {
        benchmark::DoNotOptimize(classify(p, e, modes));
    }
}
BENCHMARK(BM_ClassifyExtended)->Unit(benchmark::kMicrosecond);

void BM_ChooseAlphas(benchmark::State& state)
{
    const auto p = preset("extended-drug-free").config.params;
    for (auto _ : state) {
        benchmark::DoNotOptimize(choose_alphas(p));
    }
}
BENCHMARK(BM_ChooseAlphas)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
