#include <benchmark/benchmark.h>

#include "lcs/adjustment.hpp"
#include "lcs/kernels.hpp"
#include "lcs/projection.hpp"
#include "lcs/simbench.hpp"

namespace {

lcs::LinearScm bench_scm(int nodes) {
  auto dag = lcs::gen_er_dag(nodes, 3.0, 1);
  return lcs::gen_linear_scm(dag, 2);
}

void BM_SampleSerial(benchmark::State& st) {
  auto scm = bench_scm(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(lcs::sample_serial(scm, static_cast<int>(st.range(1)), 3));
  st.SetItemsProcessed(st.iterations() * st.range(0) * st.range(1));
}

void BM_SampleParallel(benchmark::State& st) {
  auto scm = bench_scm(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(lcs::sample(scm, static_cast<int>(st.range(1)), 3));
  st.SetItemsProcessed(st.iterations() * st.range(0) * st.range(1));
}

void BM_CorrelationSerial(benchmark::State& st) {
  auto data = lcs::sample(bench_scm(static_cast<int>(st.range(0))), static_cast<int>(st.range(1)), 4);
  for (auto _ : st) benchmark::DoNotOptimize(lcs::correlation_matrix_serial(data.values));
}

void BM_CorrelationParallel(benchmark::State& st) {
  auto data = lcs::sample(bench_scm(static_cast<int>(st.range(0))), static_cast<int>(st.range(1)), 4);
  for (auto _ : st) benchmark::DoNotOptimize(lcs::correlation_matrix(data.values));
}

void BM_FisherZQuery(benchmark::State& st) {
  auto data = lcs::sample(bench_scm(20), 10000, 5);
  lcs::FisherZ fz(data);
  std::vector<int> z;
  for (int v = 2; v < 2 + st.range(0); ++v) z.push_back(v);
  for (auto _ : st) benchmark::DoNotOptimize(fz.test(0, 1, z));
}

void BM_LcsOracle(benchmark::State& st) {
  auto dag = lcs::gen_er_dag(static_cast<int>(st.range(0)), 3.0, 6);
  auto mag = lcs::latent_project(dag, lcs::choose_latents(dag, 2, 7));
  auto backend = std::make_shared<lcs::GraphOracle>(mag);
  for (auto _ : st) {
    lcs::CiEngine ci(backend);
    benchmark::DoNotOptimize(lcs::lcs(ci, mag.name(0), mag.name(1)));
  }
}

}  // namespace

BENCHMARK(BM_SampleSerial)->Args({20, 10000})->Args({50, 100000});
BENCHMARK(BM_SampleParallel)->Args({20, 10000})->Args({50, 100000});
BENCHMARK(BM_CorrelationSerial)->Args({20, 10000})->Args({50, 100000});
BENCHMARK(BM_CorrelationParallel)->Args({20, 10000})->Args({50, 100000});
BENCHMARK(BM_FisherZQuery)->Arg(0)->Arg(4)->Arg(12);
BENCHMARK(BM_LcsOracle)->Arg(20)->Arg(30)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
