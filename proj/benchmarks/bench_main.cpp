#include <benchmark/benchmark.h>

#include <hermscal/asymptotics.hpp>
#include <hermscal/gaussian_synth.hpp>
#include <hermscal/spectral_model.hpp>
#include <hermscal/wavelet_bank.hpp>

using namespace hermscal;

static void BM_SampleGaussian(benchmark::State& state) {
  const auto model = SpectralModel::farima(0.4);
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t rep = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_gaussian(model, n, 7, rep++));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleGaussian)->RangeMultiplier(4)->Range(1 << 12, 1 << 18)->Unit(benchmark::kMillisecond);

static void BM_DwtDetails(benchmark::State& state) {
  const auto bank = make_filter_bank("db2", 6);
  const auto path = sample_gaussian(SpectralModel::farima(0.4), state.range(0), 7);
  for (auto _ : state) benchmark::DoNotOptimize(dwt_details(path.samples, bank, 6));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DwtDetails)->RangeMultiplier(4)->Range(1 << 12, 1 << 18)->Unit(benchmark::kMillisecond);

static void BM_LimitConstant(benchmark::State& state) {
  const auto bank = make_filter_bank("haar", 4);
  const int p = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(compute_L_p(bank, p, 0.4, 0));
}
BENCHMARK(BM_LimitConstant)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
