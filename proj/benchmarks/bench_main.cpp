#include <benchmark/benchmark.h>

#include <numbers>

#include "hrcplan/capability.hpp"
#include "hrcplan/cost.hpp"
#include "hrcplan/pddl/parse.hpp"
#include "hrcplan/planner/lift.hpp"
#include "hrcplan/planner/search.hpp"
#include "hrcplan/scenario.hpp"

using namespace hrcplan;

namespace {

void BM_CostTable(benchmark::State& state) {
  const auto cfg = builtin_benchmark(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_cost_table(cfg));
}
BENCHMARK(BM_CostTable)->Arg(1)->Arg(2);

void BM_Compile(benchmark::State& state) {
  const auto cfg = builtin_benchmark(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(compile(cfg));
}
BENCHMARK(BM_Compile)->Arg(1)->Arg(2)->Unit(benchmark::kMicrosecond);

void BM_ParseDomain(benchmark::State& state) {
  const std::string text = pddl::emit_domain(compile(builtin_benchmark(2)).domain);
  for (auto _ : state) benchmark::DoNotOptimize(pddl::parse_domain(text));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ParseDomain);

void BM_PlanSearch(benchmark::State& state) {
  const auto task = compile(builtin_benchmark(static_cast<int>(state.range(0)))).grounded;
  std::size_t expanded = 0;
  for (auto _ : state) {
    const auto r = planner::plan_search(task);
    expanded = r.expanded;
    benchmark::DoNotOptimize(r);
  }
  state.counters["expanded"] = static_cast<double>(expanded);
}
BENCHMARK(BM_PlanSearch)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_TimedPlan(benchmark::State& state) {
  const auto task = compile(builtin_benchmark(2)).grounded;
  const auto plan = planner::plan_search(task).plan;
  for (auto _ : state) benchmark::DoNotOptimize(planner::make_timed_plan(task, plan));
}
BENCHMARK(BM_TimedPlan)->Unit(benchmark::kMicrosecond);

void BM_CapabilityMap(benchmark::State& state) {
  const PlanarTwoLinkArm arm({0, 0, 0}, 0.4, 0.3, std::numbers::pi / 2);
  const Region bounds{{Box{{-1, -1, 0}, {1, 1, 0.04}}}};
  const CapabilityOptions options{.samples = static_cast<std::size_t>(state.range(0)), .seed = 1};
  for (auto _ : state) benchmark::DoNotOptimize(build_capability_map(arm, bounds, 0.04, options));
  state.SetItemsProcessed(state.iterations() * 2500);
}
BENCHMARK(BM_CapabilityMap)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
