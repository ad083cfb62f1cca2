// Serial reference versus OpenMP kernels on the grid sweeps used by the harness.

#include <benchmark/benchmark.h>

#include "cosym/curves.hpp"
#include "cosym/rotational.hpp"

using namespace cosym;

namespace {

const ProductSpace& space() {
    static const ProductSpace sp(SpaceFormSpec::make(Family::CH, 2, -4.0));
    return sp;
}

const CylinderImmersion& cylinder() {
    static const auto cyl = make_cylinder(space(), CurvatureLaw::constant(1.0), 0.0);
    return *cyl;
}

Grid grid(int n) {
    Grid g;
    g.rect = cylinder().domain();
    g.nu = g.nv = n;
    return g;
}

Exec exec_of(const benchmark::State& st) { return st.range(1) == 0 ? Exec::Serial : Exec::Parallel; }

void BM_PmcResidual(benchmark::State& st) {
    const Grid g = grid(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(pmc_residual(space(), cylinder(), g, exec_of(st)).value);
    st.SetItemsProcessed(st.iterations() * g.size());
    st.SetLabel(st.range(1) == 0 ? "serial" : "parallel");
}

void BM_QGrid(benchmark::State& st) {
    const Grid g = grid(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(q_grid(space(), cylinder(), g, exec_of(st)).values.data());
    st.SetItemsProcessed(st.iterations() * g.size());
    st.SetLabel(st.range(1) == 0 ? "serial" : "parallel");
}

void BM_LemmaSuite(benchmark::State& st) {
    static const ProductSpace sp(SpaceFormSpec::make(Family::CP, 2, 4.0));
    static const RotationalImmersion imm(sp, shoot_sphere(sp, 0.5));
    const Grid g = imm.default_grid(static_cast<int>(st.range(0)), 20);
    for (auto _ : st) benchmark::DoNotOptimize(lemma_identity_suite(sp, imm, g, exec_of(st)).residuals.data());
    st.SetItemsProcessed(st.iterations() * g.size());
    st.SetLabel(st.range(1) == 0 ? "serial" : "parallel");
}

}  // namespace

BENCHMARK(BM_PmcResidual)->ArgsProduct({{32, 64}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_QGrid)->ArgsProduct({{32, 64}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LemmaSuite)->ArgsProduct({{61}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
