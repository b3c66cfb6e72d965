#include <benchmark/benchmark.h>

#include "gibbslab/langevin/langevin.hpp"
#include "gibbslab/measures/gff.hpp"
#include "gibbslab/measures/gibbs.hpp"
#include "gibbslab/nls/nls.hpp"
#include "gibbslab/spectral/fft.hpp"
#include "gibbslab/support/assignment.hpp"

using namespace gibbslab;

static void BM_Dft(benchmark::State& st) {
    const auto M = static_cast<std::size_t>(st.range(0));
    Rng rng(1);
    std::vector<cplx> in(M), out(M);
    rng.fill_complex_normal(in);
    for (auto _ : st) {
        dft_forward(in, out);
        benchmark::DoNotOptimize(out.data());
    }
    st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(M));
}
BENCHMARK(BM_Dft)->RangeMultiplier(4)->Range(256, 16384);

static void BM_LangevinStep(benchmark::State& st) {
    const auto M = static_cast<std::size_t>(st.range(0));
    TorusGrid g = make_grid(static_cast<double>(M) / 51.2, M);
    Rng rng(2);
    LangevinIntegrator integ(LangevinConfig{GibbsSpec{g, 3.0}, 1e-3, 0.0, false});
    LangevinState s = make_langevin_state(sample_gff(g, rng));
    for (auto _ : st) integ.step(s, rng);
    st.SetItemsProcessed(st.iterations());
}
BENCHMARK(BM_LangevinStep)->Arg(512)->Arg(2048);

static void BM_NlsStep(benchmark::State& st) {
    const auto M = static_cast<std::size_t>(st.range(0));
    TorusGrid g = make_grid(static_cast<double>(M) / 51.2, M);
    Rng rng(3);
    TorusField u = sample_gff(g, rng);
    NlsSolver solver(g, NlsConfig{3.0, 1e-3, 1, 1.0});
    for (auto _ : st) solver.step(u);
    st.SetItemsProcessed(st.iterations());
}
BENCHMARK(BM_NlsStep)->Arg(512)->Arg(2048);

static void BM_PcnProposal(benchmark::State& st) {
    TorusGrid g = make_grid(10.0, 512);
    const auto n = static_cast<std::size_t>(st.range(0));
    for (auto _ : st) {
        Rng rng(4);
        auto e = sample_gibbs_pcn(GibbsSpec{g, 3.0}, PcnOptions{1, 0, 0.3, n}, rng);
        benchmark::DoNotOptimize(e.members.data());
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_PcnProposal)->Arg(1000);

static void BM_Hungarian(benchmark::State& st) {
    const auto n = static_cast<std::size_t>(st.range(0));
    Rng rng(5);
    CostMatrix c(n);
    for (auto& v : c.data) v = rng.uniform();
    for (auto _ : st) benchmark::DoNotOptimize(solve_assignment(c).total_cost);
}
BENCHMARK(BM_Hungarian)->Arg(64)->Arg(256);

BENCHMARK_MAIN();
