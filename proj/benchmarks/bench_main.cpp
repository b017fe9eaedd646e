#include <benchmark/benchmark.h>

#include "ht/hyper.hpp"
#include "ht/lowdim.hpp"
#include "ht/synth.hpp"

namespace {

ht::Form random_form(int m, int p, ht::Rng& rng) {
  ht::Form f(m, p);
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = rng.normal();
  return f;
}

void BM_Wedge(benchmark::State& st) {
  const int m = static_cast<int>(st.range(0));
  ht::Rng rng(1);
  const auto a = random_form(m, m / 2 - 1, rng), b = random_form(m, 2, rng);
  for (auto _ : st) benchmark::DoNotOptimize(ht::wedge(a, b));
}
BENCHMARK(BM_Wedge)->DenseRange(6, 12, 2);

void BM_Hodge(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const auto s = ht::standard_structure(n);
  ht::Rng rng(2);
  const auto a = random_form(s.m(), n + 1, rng);
  for (auto _ : st) benchmark::DoNotOptimize(ht::hodge(a, s.vol));
}
BENCHMARK(BM_Hodge)->DenseRange(3, 6);

void BM_Derive(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const auto jet = ht::synth_jet(n, n >= 3 ? ht::kW1 | ht::kW2 | ht::kW3 | ht::kW4 | ht::kW5
                                           : ht::kW2 | ht::kW4 | ht::kW5,
                                 3);
  for (auto _ : st) benchmark::DoNotOptimize(ht::derive(jet));
}
BENCHMARK(BM_Derive)->DenseRange(2, 5);

void BM_FullRecover(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const auto jet = ht::synth_jet(n, n >= 3 ? ht::kW1 | ht::kW2 | ht::kW3 | ht::kW4 | ht::kW5
                                           : ht::kW2 | ht::kW4 | ht::kW5,
                                 4);
  const auto d = ht::derive(jet);
  const ht::TorsionEngine eng(jet.s);
  for (auto _ : st) benchmark::DoNotOptimize(eng.full_recover(d.d_omega, d.d_psi_plus, d.d_psi_minus));
}
BENCHMARK(BM_FullRecover)->DenseRange(2, 5);

void BM_EngineSetup(benchmark::State& st) {
  const auto s = ht::standard_structure(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(ht::TorsionEngine(s));
}
BENCHMARK(BM_EngineSetup)->DenseRange(3, 5)->Unit(benchmark::kMillisecond);

void BM_Recover6d(benchmark::State& st) {
  const auto jet = ht::synth_jet(3, ht::kW1 | ht::kW2 | ht::kW3 | ht::kW4 | ht::kW5, 5);
  const auto d = ht::derive(jet);
  const ht::TorsionEngine eng(jet.s);
  for (auto _ : st) benchmark::DoNotOptimize(ht::recover_n3(eng, d.d_omega, d.d_psi_plus, d.d_psi_minus));
}
BENCHMARK(BM_Recover6d);

void BM_HyperRecover(benchmark::State& st) {
  const auto s = ht::build_hyper(static_cast<int>(st.range(0)));
  ht::Rng rng(6);
  const auto h = ht::derive_hyper(ht::random_hyper_jet(s, rng));
  for (auto _ : st)
    benchmark::DoNotOptimize(ht::hyper_recover(h.per[0].d_omega, h.per[1].d_omega, h.per[2].d_omega, s));
}
BENCHMARK(BM_HyperRecover)->DenseRange(1, 2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
