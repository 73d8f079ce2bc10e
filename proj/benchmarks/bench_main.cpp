#include <benchmark/benchmark.h>

#include "mrproxy/bootstrap.hpp"
#include "mrproxy/dag.hpp"
#include "mrproxy/estimators.hpp"
#include "mrproxy/scenarios.hpp"
#include "mrproxy/trio_scm.hpp"

namespace {

using namespace mrproxy;

void BM_SampleTrio(benchmark::State& state) {
  ScmConfig c;
  c.n = state.range(0);
  for (auto _ : state) {
    c.seed++;
    benchmark::DoNotOptimize(sample_trio(c));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleTrio)->Arg(100'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

void BM_ProxyWald(benchmark::State& state) {
  ScmConfig c;
  c.n = state.range(0);
  const auto ds = sample_trio(c);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        proxy_wald(ds.observed(), Correction::kMendelian, ContrastMethod::kDosageSlope));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ProxyWald)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

void BM_BootstrapSe(benchmark::State& state) {
  ScmConfig c;
  c.n = 100'000;
  const auto ds = sample_trio(c);
  const auto view = ds.observed();
  for (auto _ : state) {
    benchmark::DoNotOptimize(bootstrap_se(
        view.size(),
        [&](RowWeights w) {
          return proxy_wald(view, Correction::kMendelian, ContrastMethod::kDosageSlope, 1e-4, w);
        },
        {.replicates = static_cast<int>(state.range(0)), .seed = 1}));
  }
}
BENCHMARK(BM_BootstrapSe)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_DSeparation(benchmark::State& state) {
  const Dag d = vaccine_dag();
  for (auto _ : state) {
    benchmark::DoNotOptimize(d_separated(d, "G", "Y_P", {"A_P", "U_P"}));
  }
}
BENCHMARK(BM_DSeparation);

void BM_CheckInstrument(benchmark::State& state) {
  const Dag d = vaccine_dag();
  for (auto _ : state) benchmark::DoNotOptimize(check_instrument(d, "G", "A_P", "Y_P"));
}
BENCHMARK(BM_CheckInstrument);

}  // namespace

BENCHMARK_MAIN();
