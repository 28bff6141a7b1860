#include <benchmark/benchmark.h>

#include "ncwass/fixtures.hpp"
#include "ncwass/metric.hpp"
#include "ncwass/projective.hpp"
#include "ncwass/sampling.hpp"
#include "ncwass/transport.hpp"

using namespace ncwass;

static void BM_TransportLp(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  Rng rng(1);
  FiniteMetricSpace space = random_metric_space(k, rng);
  ProbVector mu = random_prob(k, rng);
  ProbVector nu = random_prob(k, rng);
  for (auto _ : state) {
    auto r = wasserstein_p(space, 2.0, mu, nu);
    benchmark::DoNotOptimize(r.value);
  }
}
BENCHMARK(BM_TransportLp)->Arg(4)->Arg(8)->Arg(16);

static void BM_KantorovichDual(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  Rng rng(2);
  FiniteMetricSpace space = random_metric_space(k, rng);
  ProbVector mu = random_prob(k, rng);
  ProbVector nu = random_prob(k, rng);
  for (auto _ : state) {
    auto r = kantorovich_dual(space, mu, nu);
    benchmark::DoNotOptimize(r.value);
  }
}
BENCHMARK(BM_KantorovichDual)->Arg(4)->Arg(8);

static void BM_SpectralDistance(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(3);
  LipGauge gauge =
      n == 2 ? fixtures::qubit_pauli_gauge()
             : LipGauge::multi_commutator(
                   {random_hermitian(n, rng), random_hermitian(n, rng)});
  DensityState mu = random_density(n, rng);
  DensityState nu = random_density(n, rng);
  for (auto _ : state) {
    auto d = spectral_distance(gauge, mu, nu);
    benchmark::DoNotOptimize(d.value);
  }
}
BENCHMARK(BM_SpectralDistance)->Arg(2)->Arg(3)->Arg(4);

static void BM_ContextPointMetric(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(4);
  LipGauge gauge =
      n == 2 ? fixtures::qubit_pauli_gauge()
             : LipGauge::multi_commutator(
                   {random_hermitian(n, rng), random_hermitian(n, rng)});
  CommutativeContext ctx = random_maximal_context(n, rng);
  for (auto _ : state) {
    auto pm = context_point_metric(gauge, ctx);
    benchmark::DoNotOptimize(pm.space.dist()(0, 1));
  }
}
BENCHMARK(BM_ContextPointMetric)->Arg(2)->Arg(4);

static void BM_ProjectiveSearch(benchmark::State& state) {
  LipGauge gauge = fixtures::qubit_pauli_gauge();
  Rng rng(5);
  DensityState mu = random_density(2, rng);
  DensityState nu = random_density(2, rng);
  SearchConfig cfg;
  cfg.n_haar = static_cast<int>(state.range(0));
  cfg.n_refine = 1;
  for (auto _ : state) {
    auto r = projective_wasserstein(gauge, mu, nu, 1.0, cfg);
    benchmark::DoNotOptimize(r.value);
  }
}
BENCHMARK(BM_ProjectiveSearch)->Arg(16)->Arg(64);

BENCHMARK_MAIN();
