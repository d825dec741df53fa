// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include <array>
#include <vector>

#include "nlslab/counting.hpp"
#include "nlslab/multilinear.hpp"
#include "nlslab/parallel.hpp"
#include "nlslab/spectral_flow.hpp"

using namespace nlslab;

namespace {

std::vector<SpectralField> boxes(int d, int k, std::int64_t r) {
  return std::vector<SpectralField>(static_cast<std::size_t>(2 * k + 1), box_indicator(d, r));
}

void BM_LevelsPairTable(benchmark::State& st) {
  const auto f = boxes(2, 1, st.range(0));
  multilinear::LevelQuery q;
  for (auto _ : st) benchmark::DoNotOptimize(multilinear::resonance_levels(f, q));
}

void BM_LevelsNaive(benchmark::State& st) {
  const auto f = boxes(2, 1, st.range(0));
  multilinear::LevelQuery q;
  q.mode = multilinear::EvalMode::Naive;
  for (auto _ : st) benchmark::DoNotOptimize(multilinear::reference::naive_levels(f, q));
}

flow::FlowParams flow_params(std::int64_t box) {
  flow::FlowParams p;
  p.d = 1;
  p.k = 2;
  p.box_radius = box;
  return p;
}

void BM_RhsTable(benchmark::State& st) {
  const auto p = flow_params(st.range(0));
  const flow::InteractionTable table(p);
  const auto w = flow::to_state(box_indicator(1, p.box_radius), table);
  flow::State out;
  for (auto _ : st) {
    flow::rhs_dense(w, 0.25, p, table, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_RhsNaive(benchmark::State& st) {
  const auto p = flow_params(st.range(0));
  const auto w = box_indicator(1, p.box_radius);
  for (auto _ : st) benchmark::DoNotOptimize(flow::reference::naive_rhs(w, 0.25, p));
}

// Arg: thread count.
void BM_Scan(benchmark::State& st) {
  static const int default_threads = parallel::max_threads();
  parallel::set_threads(static_cast<int>(st.range(0)));
  const std::array<double, 2> grid{8.0, 16.0};
  for (auto _ : st)
    benchmark::DoNotOptimize(counting::scan_worst_case(counting::LemmaTag::Cdprimeplus, 2, grid, 64, 1));
  parallel::set_threads(default_threads);
}

}  // namespace

BENCHMARK(BM_LevelsPairTable)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LevelsNaive)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RhsTable)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RhsNaive)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Scan)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
