// Serial reference vs OpenMP kernels: transition matrix construction, the
// sparse {0,1} product, and the Smith form of the relation matrix.

#include <benchmark/benchmark.h>

#include <map>

#include "a2k/pipeline.hpp"

using namespace a2k;

namespace {

const Pipeline& pipeline(std::uint64_t q) {
  static std::map<std::uint64_t, Pipeline> cache;
  auto it = cache.find(q);
  if (it == cache.end()) {
    RunConfig cfg;
    cfg.q = q;
    it = cache.emplace(q, build_pipeline(cfg)).first;
  }
  return it->second;
}

Exec exec_of(const benchmark::State& state) { return state.range(1) ? Exec::parallel : Exec::serial; }

void BM_TransitionMatrix(benchmark::State& state) {
  const auto& pl = pipeline(static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_transition_matrix(pl.t1, 1, pl.tm.rule, exec_of(state)));
  state.SetLabel(exec_of(state) == Exec::serial ? "serial" : "parallel");
}

void BM_Multiply(benchmark::State& state) {
  const auto& pl = pipeline(static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(multiply(pl.tm.m1, pl.tm.m2, exec_of(state)));
  state.SetLabel(exec_of(state) == Exec::serial ? "serial" : "parallel");
}

void BM_SmithForm(benchmark::State& state) {
  const auto& pl = pipeline(static_cast<std::uint64_t>(state.range(0)));
  const auto r = relation_matrix(pl.tm.m1, pl.tm.m2, RelationSet::m1_only);
  SnfOptions opts;
  opts.exec = exec_of(state);
  opts.with_u = opts.with_v = false;
  for (auto _ : state) benchmark::DoNotOptimize(smith_normal_form(r, opts));
  state.SetLabel(exec_of(state) == Exec::serial ? "serial" : "parallel");
}

}  // namespace

BENCHMARK(BM_TransitionMatrix)->ArgsProduct({{3, 5, 8}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Multiply)->ArgsProduct({{3, 5, 8}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SmithForm)->ArgsProduct({{3, 4, 5}, {0, 1}})->Unit(benchmark::kMillisecond)->Iterations(1);

BENCHMARK_MAIN();
