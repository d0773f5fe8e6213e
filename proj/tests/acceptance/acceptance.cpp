// Acceptance suite: one line per criterion, non-zero exit if any fails.
//   hrcplan_acceptance            run all
//   hrcplan_acceptance --only N   run criterion N

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "generators.hpp"
#include "hrcplan/capability.hpp"
#include "hrcplan/cost.hpp"
#include "hrcplan/error.hpp"
#include "hrcplan/pddl/parse.hpp"
#include "hrcplan/pddl/plan.hpp"
#include "hrcplan/planner/lift.hpp"
#include "hrcplan/planner/search.hpp"
#include "hrcplan/planner/state.hpp"
#include "hrcplan/planner/validate.hpp"
#include "hrcplan/scenario.hpp"

using namespace hrcplan;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTableTol = 0.005;

struct Failure {
  std::string reason;
};

void expect(bool ok, const std::string& reason) {
  if (!ok) throw Failure{reason};
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

// ---------------------------------------------------------------- cost tables

/// Solo totals of `agent` at `site` over every row of the given kinds.
std::vector<double> cell(const CostTable& table, const std::string& agent, std::set<ActionKind> kinds,
                         const std::string& site) {
  std::vector<double> out;
  for (const auto& e : table.entries())
    if (e.agents == std::vector<std::string>{agent} && kinds.contains(e.kind) && e.site == site)
      out.push_back(e.total.value());
  return out;
}

/// Expected cell: its finite values, or empty for a cell that is infinite throughout.
void check_cell(const std::vector<double>& got, const std::vector<double>& finite_expected, const std::string& where) {
  expect(!got.empty(), where + ": no rows");
  std::vector<double> finite;
  for (double v : got)
    if (std::isfinite(v)) finite.push_back(v);
  if (finite_expected.empty()) {
    if (!finite.empty()) throw Failure{where + ": expected infinity, got " + fmt(finite.front())};
    return;
  }
  for (double v : finite) {
    const bool matched = std::any_of(finite_expected.begin(), finite_expected.end(),
                                     [&](double e) { return std::abs(v - e) <= kTableTol; });
    expect(matched, where + ": unexpected value " + fmt(v));
  }
  for (double e : finite_expected) {
    const bool found =
        std::any_of(finite.begin(), finite.end(), [&](double v) { return std::abs(v - e) <= kTableTol; });
    expect(found, where + ": missing value " + fmt(e));
  }
}

struct ExpectedRow {
  std::string agent;
  std::vector<std::vector<double>> cells;
};

void check_grid(const CostTable& table, std::set<ActionKind> kinds, const std::vector<std::string>& sites,
                const std::vector<ExpectedRow>& rows) {
  for (const auto& row : rows)
    for (std::size_t i = 0; i < sites.size(); ++i)
      check_cell(cell(table, row.agent, kinds, sites[i]), row.cells[i], row.agent + "@" + sites[i]);
}

void criterion_table_pick_place() {
  const auto t0 = Clock::now();
  const CostTable table = build_cost_table(builtin_benchmark(2));
  expect(seconds_since(t0) < 1.0, "cost table took longer than 1 s");
  const std::vector<std::string> sites = {"storage_1", "storage_2", "storage_3", "workspace"};
  check_grid(table, {ActionKind::Pick, ActionKind::Place}, sites,
             {
                 {"robot1", {{1.0}, {}, {10.09}, {2.092}}},
                 {"robot2", {{}, {1.0}, {}, {2.092}}},
                 {"worker", {{3.976}, {3.976}, {1.404}, {1.637}}},
             });
  // The information gate: robot2 has one placement that is infinite before guidance
  // and finite after it.
  bool gated = false;
  for (const auto& e : table.entries())
    if (e.agents == std::vector<std::string>{"robot2"} && e.kind == ActionKind::Place && e.state_dependent &&
        e.phase == KnowledgePhase::Initial && e.total.is_infinite()) {
      const CostEntry* twin = table.find(e.agents, e.kind, e.site, e.part, KnowledgePhase::Informed);
      gated = gated || (twin != nullptr && std::abs(twin->total.value() - 2.092) <= kTableTol);
    }
  expect(gated, "robot2 has no information-gated placement");
}

void criterion_table_move() {
  const auto t0 = Clock::now();
  const CostTable table = build_cost_table(builtin_benchmark(2));
  expect(seconds_since(t0) < 1.0, "cost table took longer than 1 s");
  check_grid(table, {ActionKind::Move}, {"path_1", "path_2", "path_3"},
             {
                 {"robot1", {{1.637}, {}, {10.09}}},
                 {"robot2", {{}, {1.637}, {}}},
                 {"worker", {{3.976}, {3.976}, {1.637}}},
             });
}

void criterion_cooperation() {
  const auto cfg = builtin_benchmark(1);
  const std::vector<AgentKind> pair = {AgentKind::Human, AgentKind::Robot};
  const double cp = cooperation_criterion(pair, cfg.gains);
  expect(cp == 1.6, "C_P = " + fmt(cp));
  const CostTable table = build_cost_table(cfg);
  const CostEntry* coop = table.find({"worker", "robot2"}, ActionKind::Cooperate, "workspace", "ring_1");
  expect(coop != nullptr, "no guided placement row");
  expect(std::abs(coop->total.value() - 2.983) <= 0.01, "cooperative cost " + coop->total.to_string());
}

void criterion_reconstruction() {
  std::size_t checked = 0;
  for (int cycles : {1, 2}) {
    const CostTable table = build_cost_table(builtin_benchmark(cycles));
    for (const auto& e : table.entries()) {
      if (e.agents.size() != 1 || e.total.is_infinite()) continue;
      const auto& b = e.breakdown;
      const ExtCost sum = b.f_s + b.f_i + b.f_r + b.r_r + b.c_i + b.c_s;
      expect(std::abs(e.total.value() - 1.0 - sum.value()) <= kTableTol,
             e.agents.front() + " " + std::string(to_string(e.kind)) + " " + e.param());
      ++checked;
    }
  }
  expect(checked > 0, "no finite rows");
}

// ---------------------------------------------------------------- planning

std::size_t count_schema(const pddl::GroundedTask& task, const std::vector<std::size_t>& plan, const std::string& s) {
  return static_cast<std::size_t>(
      std::count_if(plan.begin(), plan.end(), [&](std::size_t i) { return task.ops[i].schema == s; }));
}

struct Solved {
  pddl::GroundedTask task;
  std::vector<std::size_t> plan;
  planner::Ticks cost = 0;
  pddl::TimedPlan timed;
};

Solved solve_demo(int cycles) {
  const auto t0 = Clock::now();
  auto compiled = compile(builtin_benchmark(cycles));
  const auto result = planner::plan_search(compiled.grounded);
  expect(result.solved, "demo " + std::to_string(cycles) + ": no plan");
  const auto timed = planner::make_timed_plan(compiled.grounded, result.plan);
  const auto report = planner::validate_plan(compiled.grounded, timed);
  expect(report.ok(), "demo " + std::to_string(cycles) + ": " + report.to_json());
  expect(seconds_since(t0) < 10.0, "demo " + std::to_string(cycles) + " took longer than 10 s");
  const auto oracle = planner::brute_force_optimal(compiled.grounded);
  expect(oracle.status == planner::BruteForceResult::Status::Optimal, "brute force did not finish");
  expect(oracle.cost_ticks == result.cost_ticks, "demo " + std::to_string(cycles) + " cost " + result.cost.to_string() +
                                                     " is not optimal (" +
                                                     planner::from_ticks(oracle.cost_ticks).to_string() + ")");
  return {std::move(compiled.grounded), result.plan, result.cost_ticks, timed};
}

void criterion_plan_structure() {
  const auto one = solve_demo(1);
  expect(count_schema(one.task, one.plan, "cooperate-guide") == 1, "demo 1 needs exactly one guided step");

  const auto two = solve_demo(2);
  expect(count_schema(two.task, two.plan, "cooperate-guide") == 1, "demo 2 needs exactly one guided step");
  // Cycles are delimited in time by the assembly steps of the schedule.
  std::vector<const pddl::PlanStep*> assemblies;
  const pddl::PlanStep* guide = nullptr;
  const pddl::PlanStep* solo = nullptr;
  for (const auto& step : two.timed.steps) {
    if (step.action == "assemble") assemblies.push_back(&step);
    if (step.action == "cooperate-guide") guide = &step;
    if (step.action == "place-informed" && step.args.front() == "robot2") solo = &step;
  }
  expect(assemblies.size() == 2, "demo 2 should assemble twice");
  expect(guide != nullptr && guide->end_s() <= assemblies[0]->start_s, "guided step is not in the first cycle");
  expect(solo != nullptr && solo->start_s >= assemblies[0]->start_s && solo->end_s() <= assemblies[1]->start_s,
         "robot2 does not place alone in the second cycle");
}

std::vector<pddl::GroundedTask> optimality_suite() {
  testgen::Rng rng(20240611);
  std::vector<pddl::GroundedTask> tasks;
  for (int i = 0; i < 500; ++i) tasks.push_back(testgen::random_task(rng));
  return tasks;
}

void criterion_optimality() {
  const auto t0 = Clock::now();
  std::size_t solvable = 0;
  for (const auto& task : optimality_suite()) {
    const auto result = planner::plan_search(task);
    const auto oracle = planner::brute_force_optimal(task);
    expect(oracle.status != planner::BruteForceResult::Status::LimitReached, "brute force hit its limit");
    const bool reachable = oracle.status == planner::BruteForceResult::Status::Optimal;
    expect(result.solved == reachable, "solvability disagrees with brute force");
    if (reachable) {
      ++solvable;
      expect(result.cost_ticks == oracle.cost_ticks, "search cost " + result.cost.to_string() + " vs optimum " +
                                                         planner::from_ticks(oracle.cost_ticks).to_string());
    }
    const auto to_go = planner::cost_to_go(task);
    expect(to_go.has_value(), "state space too large");
    for (const auto& [state, optimal] : *to_go)
      expect(planner::h_max_ticks(task, state) <= optimal, "inadmissible heuristic");
  }
  expect(solvable >= 100, "too few solvable tasks (" + std::to_string(solvable) + ")");
  expect(seconds_since(t0) < 60.0, "suite took longer than 60 s");
}

// ---------------------------------------------------------------- validator

pddl::TimedPlan timed_in_plan_order(const pddl::GroundedTask& task, const std::vector<std::size_t>& plan) {
  const auto graph = planner::partial_order_lift(task, plan);
  std::vector<double> durations;
  for (std::size_t i : plan) durations.push_back(task.ops[i].duration_s);
  const auto sched = planner::schedule(graph, durations);
  pddl::TimedPlan timed;
  for (std::size_t j = 0; j < plan.size(); ++j) {
    const auto& op = task.ops[plan[j]];
    timed.steps.push_back({sched.start_s[j], op.schema, op.args, op.duration_s, op.cost});
  }
  return timed;
}

pddl::TimedPlan finished(pddl::TimedPlan plan) {
  plan.refresh();
  return plan;
}

/// Links whose producer actually establishes the proposition.
std::vector<planner::CausalLink> establishing_links(const pddl::GroundedTask& task,
                                                    const std::vector<std::size_t>& plan,
                                                    const planner::PrecedenceGraph& graph) {
  std::vector<planner::State> before;
  planner::State s = planner::initial_state(task);
  for (std::size_t i : plan) {
    before.push_back(s);
    s = planner::apply(s, task.ops[i]);
  }
  std::vector<planner::CausalLink> out;
  for (const auto& link : graph.links)
    if (link.producer != planner::kInitStep && link.consumer != planner::kGoalStep &&
        !before[link.producer].test(link.prop))
      out.push_back(link);
  return out;
}

struct MutationTally {
  std::size_t plans = 0;
  std::size_t mutants = 0;
  std::vector<std::string> survivors;
};

void mutate_plan(const pddl::GroundedTask& task, const std::vector<std::size_t>& plan, MutationTally& tally) {
  const auto base = timed_in_plan_order(task, plan);
  expect(planner::validate_plan(task, finished(base)).ok(), "an unmutated plan fails validation");
  ++tally.plans;
  for (std::size_t j = 0; j < base.steps.size(); ++j) {
    auto mutant = base;
    mutant.steps.erase(mutant.steps.begin() + static_cast<std::ptrdiff_t>(j));
    ++tally.mutants;
    if (planner::validate_plan(task, finished(mutant)).ok())
      tally.survivors.push_back("deleting (" + base.steps[j].name() + ")");
  }
  const auto graph = planner::partial_order_lift(task, plan);
  std::set<std::pair<std::size_t, std::size_t>> swapped;
  for (const auto& link : establishing_links(task, plan, graph)) {
    if (!swapped.insert({link.producer, link.consumer}).second) continue;
    auto mutant = base;
    std::swap(mutant.steps[link.producer].start_s, mutant.steps[link.consumer].start_s);
    ++tally.mutants;
    if (planner::validate_plan(task, finished(mutant)).ok())
      tally.survivors.push_back("swapping (" + base.steps[link.producer].name() + ") and (" +
                                base.steps[link.consumer].name() + ")");
  }
}

void criterion_mutation() {
  MutationTally tally;
  for (const auto& task : optimality_suite()) {
    const auto result = planner::plan_search(task);
    if (result.solved && !result.plan.empty()) mutate_plan(task, result.plan, tally);
  }
  for (int cycles : {1, 2}) {
    const auto compiled = compile(builtin_benchmark(cycles));
    mutate_plan(compiled.grounded, planner::plan_search(compiled.grounded).plan, tally);
  }
  expect(tally.plans >= 100, "too few plans");
  if (!tally.survivors.empty())
    throw Failure{std::to_string(tally.survivors.size()) + " of " + std::to_string(tally.mutants) +
                  " mutants validate, e.g. " + tally.survivors.front()};
}

// ---------------------------------------------------------------- parsers

std::size_t line_count(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) + 1;
}

template <typename Parse>
void fuzz_one(const std::string& text, Parse parse) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    expect(e.line() >= 1 && e.line() <= line_count(text) && e.column() >= 1,
           "unpositioned error: " + std::string(e.what()));
  } catch (const std::exception& e) {
    throw Failure{"unexpected exception: " + std::string(e.what())};
  }
}

void criterion_parsers() {
  const auto compiled = compile(builtin_benchmark(2));
  const std::string domain_text = pddl::emit_domain(compiled.domain);
  const std::string problem_text = pddl::emit_problem(compiled.problem);
  const std::string plan_text =
      pddl::emit_plan(planner::make_timed_plan(compiled.grounded, planner::plan_search(compiled.grounded).plan));

  expect(pddl::parse_domain(domain_text) == compiled.domain, "benchmark domain round trip");
  expect(pddl::parse_problem(problem_text, &compiled.domain) == compiled.problem, "benchmark problem round trip");

  testgen::Rng rng(77);
  for (int i = 0; i < 100; ++i) {
    const auto d = testgen::random_domain(rng);
    const auto p = testgen::random_problem(rng, d);
    expect(pddl::parse_domain(pddl::emit_domain(d)) == d, "random domain round trip " + std::to_string(i));
    expect(pddl::parse_problem(pddl::emit_problem(p), &d) == p, "random problem round trip " + std::to_string(i));
  }

  for (int i = 0; i < 100'000; ++i) {
    switch (i % 3) {
      case 0:
        fuzz_one(testgen::mutate(rng, domain_text), [](const std::string& t) { pddl::parse_domain(t); });
        break;
      case 1:
        fuzz_one(testgen::mutate(rng, problem_text),
                 [&](const std::string& t) { pddl::parse_problem(t, &compiled.domain); });
        break;
      default:
        fuzz_one(testgen::mutate(rng, plan_text), [](const std::string& t) { pddl::parse_plan(t); });
    }
  }
}

// ---------------------------------------------------------------- capability

struct ConstantOracle : ReachabilityOracle {
  explicit ConstantOracle(bool answer) : answer(answer) {}
  bool reachable(const Point3&, const Point3&) const override { return answer; }
  bool answer;
};

void criterion_capability() {
  const auto t0 = Clock::now();
  const PlanarTwoLinkArm arm({0, 0, 0}, 0.4, 0.3, std::numbers::pi / 2);
  const Region bounds{{Box{{-1, -1, 0}, {1, 1, 0.04}}}};
  const auto coarse = build_capability_map(arm, bounds, 0.04, {.samples = 200, .seed = 1});
  const auto dense = build_capability_map(arm, bounds, 0.04, {.samples = 10'000, .seed = 2});
  expect(coarse.dims == (GridDims{50, 50, 1}), "grid is not 50x50");
  std::size_t agree = 0;
  for (std::size_t i = 0; i < coarse.index.size(); ++i)
    agree += classify_region(coarse.index[i]) == classify_region(dense.index[i]);
  const double share = static_cast<double>(agree) / static_cast<double>(coarse.index.size());
  expect(share >= 0.95, "classification agreement " + fmt(100 * share) + "%");

  const ConstantOracle yes(true), no(false);
  for (std::uint64_t seed : {0, 1, 99}) {
    expect(reachability_index(yes, {0.3, 0.1, 0}, 200, seed, 0.02) == 100.0, "all-accept is not 100");
    expect(reachability_index(no, {0.3, 0.1, 0}, 200, seed, 0.02) == 0.0, "all-reject is not 0");
  }
  expect(seconds_since(t0) < 30.0, "capability maps took longer than 30 s");
}

void criterion_piecewise() {
  AgentSpec robot;
  robot.id = "r";
  robot.kind = AgentKind::Robot;
  robot.strength_limit_kg = 1.0;
  const std::vector<std::pair<double, double>> cases = {
      {100, 0}, {60.001, 0}, {60, 0.4}, {54.5, 0.455}, {20.001, 0.79999}, {20, 5}, {11, 100.0 / 11.0}, {0, kInf}};
  for (const auto& [d, want] : cases) {
    const double got = reachability_cost(robot, d).value();
    const bool ok = std::isinf(want) ? std::isinf(got) : std::abs(got - want) <= 1e-9;
    expect(ok, "d = " + fmt(d) + ": got " + fmt(got) + ", want " + fmt(want));
  }
}

struct Criterion {
  int id;
  const char* name;
  std::function<void()> check;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {1, "pick/place cost table", criterion_table_pick_place},
      {2, "move cost table", criterion_table_move},
      {3, "cooperation figures", criterion_cooperation},
      {4, "total equals one plus components", criterion_reconstruction},
      {5, "demo plan structure and optimality", criterion_plan_structure},
      {6, "search optimality and admissibility", criterion_optimality},
      {7, "validator mutation testing", criterion_mutation},
      {8, "parser robustness and round trips", criterion_parsers},
      {9, "capability map fidelity", criterion_capability},
      {10, "reachability cost boundaries", criterion_piecewise},
  };
  return all;
}

bool run(const Criterion& c) {
  const auto t0 = Clock::now();
  std::string reason;
  try {
    c.check();
  } catch (const Failure& f) {
    reason = f.reason;
  } catch (const std::exception& e) {
    reason = std::string("exception: ") + e.what();
  }
  std::printf("[%s] %d %s (%.3f s)%s%s\n", reason.empty() ? "PASS" : "FAIL", c.id, c.name, seconds_since(t0),
              reason.empty() ? "" : ": ", reason.c_str());
  std::fflush(stdout);
  return reason.empty();
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc == 3 && std::strcmp(argv[1], "--only") == 0) {
    only = std::atoi(argv[2]);
  } else if (argc != 1) {
    std::fprintf(stderr, "usage: %s [--only N]\n", argv[0]);
    return 2;
  }
  bool ok = true;
  bool ran = false;
  for (const auto& c : criteria()) {
    if (only != 0 && c.id != only) continue;
    ran = true;
    ok = run(c) && ok;
  }
  if (!ran) {
    std::fprintf(stderr, "no criterion %d\n", only);
    return 2;
  }
  return ok ? 0 : 1;
}
