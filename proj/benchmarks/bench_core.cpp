#include <benchmark/benchmark.h>

#include "simcorr/distributions.hpp"
#include "simcorr/garch.hpp"
#include "simcorr/inference.hpp"
#include "simcorr/reference_estimators.hpp"
#include "simcorr/simulation.hpp"

using namespace simcorr;

namespace {

Sample panel(std::size_t T, std::size_t n) {
  SeededRng rng(1);
  return sample_elliptical(EllipticalFamily::gaussian(build_equicorrelation(1.0, 0.4, n)), T, rng);
}

void BM_PhiRBivariate(benchmark::State& state) {
  const Sample s = panel(1024, 2);
  std::size_t t = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(phi_r(s(t, 0), s(t, 1)));
    t = (t + 1) & 1023;
  }
}
BENCHMARK(BM_PhiRBivariate);

void BM_PhiRMultivariate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Sample s = panel(1024, n);
  std::size_t t = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(phi_r(s.row(t)));
    t = (t + 1) & 1023;
  }
}
BENCHMARK(BM_PhiRMultivariate)->Arg(3)->Arg(9)->Arg(50);

void BM_GammaHat(benchmark::State& state) {
  const Sample s = panel(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(gamma_hat(s));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GammaHat)->Arg(40)->Arg(5000);

void BM_FiniteSampleCdf(benchmark::State& state) {
  const FiniteSampleLaw law(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(law.cdf(1.7));
}
BENCHMARK(BM_FiniteSampleCdf)->Args({1, 2})->Args({40, 2})->Args({100, 2})->Args({8, 5});

void BM_FiniteSampleQuantile(benchmark::State& state) {
  const FiniteSampleLaw law(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(law.quantile(0.975));
}
BENCHMARK(BM_FiniteSampleQuantile)->Arg(8)->Arg(100);

void BM_CorrelationCi(benchmark::State& state) {
  const Sample s = panel(40, 2);
  for (auto _ : state) benchmark::DoNotOptimize(correlation_ci(s, {.level = 0.95, .law = Law::exact}));
}
BENCHMARK(BM_CorrelationCi);

void BM_KendallTau(benchmark::State& state) {
  const Sample s = panel(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(kendall_tau(s));
}
BENCHMARK(BM_KendallTau)->Arg(40)->Arg(2000);

void BM_EllipticalDraw(benchmark::State& state) {
  const EllipticalSampler sampler(EllipticalFamily::student_t(5.0, build_equicorrelation(1.0, 0.4, 9)));
  SeededRng rng(2);
  std::vector<double> x(9);
  for (auto _ : state) {
    sampler.draw(rng, x);
    benchmark::DoNotOptimize(x.data());
  }
}
BENCHMARK(BM_EllipticalDraw);

void BM_CorrFilter(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Sample z = panel(5000, n);
  const CorrParams p{0.02, 0.9, 0.05};
  for (auto _ : state) benchmark::DoNotOptimize(deco_corr_filter(z, p, 0.3));
  state.SetItemsProcessed(state.iterations() * 5000);
}
BENCHMARK(BM_CorrFilter)->Arg(2)->Arg(9);

void BM_EgarchFilter(benchmark::State& state) {
  const Sample r = panel(5000, 2);
  const auto col = r.column(0);
  const EgarchParams p{-0.05, 0.95, 0.1, 0.5};
  for (auto _ : state) benchmark::DoNotOptimize(egarch_filter(col, p, 0.0, 1.0));
  state.SetItemsProcessed(state.iterations() * 5000);
}
BENCHMARK(BM_EgarchFilter);

}  // namespace

BENCHMARK_MAIN();
