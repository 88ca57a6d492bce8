#include <benchmark/benchmark.h>

#include "mallows/asep.hpp"
#include "mallows/measures.hpp"
#include "mallows/sampler.hpp"
#include "mallows/sixvertex.hpp"

using namespace mallows;

static void BM_pmf_neighbors(benchmark::State& st) {
  const MallowsParams p{QParam(0.5), 1.3};
  const std::vector<long long> vals{3, -1, 4, 0, -2};
  for (auto _ : st) {
    benchmark::DoNotOptimize(pmf_neighbors(p, 0, vals).log_value);
  }
}
BENCHMARK(BM_pmf_neighbors);

static void BM_mixture_oracle_k2(benchmark::State& st) {
  const MallowsParams p{QParam(0.5), 1.0};
  for (auto _ : st) {
    benchmark::DoNotOptimize(oracle_mixture_pmf(p, 0, {0, 2}).log_prob.log_value);
  }
}
BENCHMARK(BM_mixture_oracle_k2);

static void BM_marginalized_oracle_span6(benchmark::State& st) {
  const MallowsParams p{QParam(0.5), 1.0};
  const auto pv = PositionValuePairs::of({{0, 2}, {6, -1}});
  for (auto _ : st) {
    benchmark::DoNotOptimize(oracle_marginalized_pmf(p, pv).log_prob.log_value);
  }
}
BENCHMARK(BM_marginalized_oracle_span6);

static void BM_sample_window(benchmark::State& st) {
  const MallowsParams p{QParam(0.5), 1.0};
  SeededRng rng(1, 1);
  const long long k = st.range(0);
  for (auto _ : st) {
    benchmark::DoNotOptimize(sample_window(p, -k / 2, k, rng).values.size());
  }
}
BENCHMARK(BM_sample_window)->Arg(8)->Arg(33);

static void BM_asep_events(benchmark::State& st) {
  const MallowsParams p{QParam(0.5), 1.0};
  SeededRng rng(2, 0);
  for (auto _ : st) {
    AsepWindowState s = AsepWindowState::identity(20);
    simulate(s, p, 10.0, rng);
    benchmark::DoNotOptimize(s.labels[0]);
  }
}
BENCHMARK(BM_asep_events);

static void BM_sixvertex_sweep(benchmark::State& st) {
  const VertexParams vp{0.05, 0.025};
  const RectDomain dom = RectDomain::standard(80, 40);
  SeededRng rng(3, 0);
  for (auto _ : st) {
    benchmark::DoNotOptimize(sample_lattice(vp, dom, rng).exits.size());
  }
}
BENCHMARK(BM_sixvertex_sweep);

BENCHMARK_MAIN();
