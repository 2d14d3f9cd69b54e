// Serial reference kernels against their OpenMP versions, plus one full
// Strang step. Run with OMP_NUM_THREADS set to compare thread counts.
#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "disperse/kernels.hpp"
#include "disperse/potentials.hpp"
#include "disperse/propagators.hpp"

namespace {

using disperse::cplx;
namespace ks = disperse::kernels::serial;
namespace kp = disperse::kernels::parallel;

struct Data {
  std::vector<cplx> u;
  std::vector<double> w;
};

Data make_data(std::size_t n) {
  std::mt19937_64 rng(n);
  std::normal_distribution<double> g;
  Data d{std::vector<cplx>(n), std::vector<double>(n)};
  for (std::size_t j = 0; j < n; ++j) {
    d.u[j] = cplx(g(rng), g(rng));
    d.w[j] = g(rng);
  }
  return d;
}

template <bool Parallel>
void BM_SumAbsPow(benchmark::State& state) {
  const Data d = make_data(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    const double s = Parallel ? kp::sum_abs_pow(d.u, 8.0) : ks::sum_abs_pow(d.u, 8.0);
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_WeightedNormSq(benchmark::State& state) {
  const Data d = make_data(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    const double s = Parallel ? kp::weighted_norm_sq(d.w, d.u) : ks::weighted_norm_sq(d.w, d.u);
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_PotentialPhase(benchmark::State& state) {
  Data d = make_data(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    if (Parallel)
      kp::potential_phase(d.u, d.w, 6.0, 1e-3);
    else
      ks::potential_phase(d.u, d.w, 6.0, 1e-3);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_StrangStep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const disperse::Grid grid(n, 40.0 * 3.141592653589793);
  const auto sample = disperse::sample_potential(
      disperse::builtin_potential(disperse::PotentialKind::sech2, 1.0, 1.0), grid);
  disperse::StrangStepper stepper(grid, 1e-3, 6.0, &sample);
  std::vector<cplx> u(n);
  for (std::size_t j = 0; j < n; ++j) u[j] = std::exp(-0.5 * grid.x(j) * grid.x(j));
  for (auto _ : state) {
    stepper.step(u);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

constexpr int kSmall = 1 << 12;
constexpr int kLarge = 1 << 20;

BENCHMARK(BM_SumAbsPow<false>)->Name("sum_abs_pow/serial")->Range(kSmall, kLarge);
BENCHMARK(BM_SumAbsPow<true>)->Name("sum_abs_pow/parallel")->Range(kSmall, kLarge)->UseRealTime();
BENCHMARK(BM_WeightedNormSq<false>)->Name("weighted_norm_sq/serial")->Range(kSmall, kLarge);
BENCHMARK(BM_WeightedNormSq<true>)->Name("weighted_norm_sq/parallel")->Range(kSmall, kLarge)->UseRealTime();
BENCHMARK(BM_PotentialPhase<false>)->Name("potential_phase/serial")->Range(kSmall, kLarge);
BENCHMARK(BM_PotentialPhase<true>)->Name("potential_phase/parallel")->Range(kSmall, kLarge)->UseRealTime();
BENCHMARK(BM_StrangStep)->Name("strang_step")->Range(kSmall, 1 << 16)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
