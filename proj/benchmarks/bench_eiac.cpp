#include <benchmark/benchmark.h>

#include <random>

#include "eiac/config.hpp"
#include "eiac/oracle.hpp"
#include "eiac/stability.hpp"
#include "eiac/transfer.hpp"
#include "eiac/validation.hpp"

namespace {

eiac::BuiltConfig prototype(const char* name) {
    const std::string dir = EIAC_CONFIG_DIR;
    return eiac::build_system(eiac::parse_config_file(dir + "/" + name), dir);
}

void BM_SweepInputImpedance(benchmark::State& state) {
    const eiac::BuiltConfig c = prototype("prototype_200w.ini");
    const eiac::FreqExpr z = eiac::z_in_closed(c.system.plant());
    const eiac::FreqGrid grid(1.0, 5e4, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(eiac::sweep(z, grid));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(grid.size()));
}
BENCHMARK(BM_SweepInputImpedance)->Arg(20)->Arg(100)->Arg(500);

void BM_BuildPrimed(benchmark::State& state) {
    const eiac::BuiltConfig c = prototype("prototype_20kw.ini");
    for (auto _ : state) benchmark::DoNotOptimize(c.system.primed());
}
BENCHMARK(BM_BuildPrimed);

void BM_OracleSolve(benchmark::State& state) {
    const eiac::CircuitSpec circ = prototype("prototype_200w.ini").system.circuit();
    for (auto _ : state) benchmark::DoNotOptimize(eiac::oracle_primed_coeffs(circ, 81.6));
}
BENCHMARK(BM_OracleSolve);

void BM_Margins(benchmark::State& state) {
    const eiac::FreqExpr t = eiac::loop_gain(prototype("prototype_20kw.ini").system.plant());
    const eiac::FreqGrid grid(1.0, 5e3, 100);
    for (auto _ : state) benchmark::DoNotOptimize(eiac::margins(t, grid));
}
BENCHMARK(BM_Margins);

void BM_ValidationCases(benchmark::State& state) {
    eiac::ValidationOptions o;
    o.seed = 7;
    o.cases = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(eiac::run_validation(o));
}
BENCHMARK(BM_ValidationCases)->Arg(4)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
