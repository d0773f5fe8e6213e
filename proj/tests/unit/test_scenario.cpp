#include <doctest.h>

#include <algorithm>

#include "hrcplan/error.hpp"
#include "hrcplan/pddl/parse.hpp"
#include "hrcplan/planner/search.hpp"
#include "hrcplan/scenario.hpp"

using namespace hrcplan;

namespace {

const std::string kCell = HRCPLAN_DATA_DIR "/assembly_cell.yaml";

const char* kSmall = R"(
name: tiny
locations:
  - {id: a, position: [0, 0, 0]}
  - {id: b, position: [1m, 0, 0]}
agents:
  - {id: w, kind: human, strength: 20kg, base: [0, 0, 0], start: a}
parts:
  - {id: box, weight: 500g, at: a}
paths:
  - {id: ab, from: a, to: b}
gains:
  c_k:
    human: {pick: 0.1, place: 0.1, move: 0.4}
  k_c: 3
goal:
  - at(box, b)
)";

ScenarioError scenario_error(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ScenarioError& e) {
    return e;
  }
  FAIL("expected a scenario error");
  return ScenarioError("", "");
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("benchmark file matches the built-in cell") {
  auto file = load_scenario(kCell);
  auto builtin = builtin_benchmark(2);
  CHECK(file.agents == builtin.agents);
  CHECK(file.parts == builtin.parts);
  CHECK(file.locations == builtin.locations);
  CHECK(file.paths == builtin.paths);
  CHECK(file.gains == builtin.gains);
  CHECK(file.info_reqs == builtin.info_reqs);
  CHECK(file.safety_d == builtin.safety_d);
  CHECK(file.durations == builtin.durations);
  CHECK(file.goal == builtin.goal);
  CHECK(file.assemble == builtin.assemble);
  CHECK(file == builtin);
  CHECK(build_cost_table(file).to_csv() == build_cost_table(builtin).to_csv());
}

TEST_CASE("built-in benchmark setup") {
  const auto cfg = builtin_benchmark(1);
  CHECK(cfg.agents.size() == 3);
  CHECK(cfg.find_part("base_1")->weight_kg == 0.135);
  CHECK(cfg.find_part("ring_1")->weight_kg == 0.073);
  CHECK(cfg.find_agent("robot1")->start == "storage_1");
  CHECK(cfg.find_agent("robot2")->start == "workspace");
  CHECK(cfg.find_agent("worker")->start == "storage_3");
  CHECK(cfg.gains.risk(AgentKind::Robot, ActionKind::Pick) == 0.4);
  CHECK(cfg.gains.risk(AgentKind::Robot, ActionKind::Place) == 0.4);
  CHECK(cfg.gains.risk(AgentKind::Robot, ActionKind::Move) == 0.6);
  CHECK(cfg.gains.risk(AgentKind::Human, ActionKind::Pick) == 0.1);
  CHECK(cfg.gains.risk(AgentKind::Human, ActionKind::Move) == 0.4);
  CHECK(cfg.gains.k_c == 3.0);
  CHECK(cfg.gains.c_h == 0.2);
  CHECK(cfg.gains.c_r == 1.0);
  CHECK(cfg.find_location("workspace")->reach_for("robot1") == 54.5);
  CHECK(cfg.find_location("storage_3")->reach_for("robot1") == 11.0);
  CHECK(cfg.goal.size() == 1);
  CHECK(builtin_benchmark(2).goal.size() == 2);
  CHECK_THROWS_AS(builtin_benchmark(3), Error);
  CHECK_THROWS_AS(builtin_benchmark(0), Error);
}

TEST_CASE("scenario documents") {
  const auto cfg = parse_scenario(kSmall);
  CHECK(cfg.name == "tiny");
  CHECK(cfg.find_location("b")->position.x == 1.0);
  CHECK(cfg.find_part("box")->weight_kg == 0.5);
  CHECK(cfg.find_agent("w")->strength_limit_kg == 20.0);
  CHECK(cfg.durations == Durations{});

  const auto neg = scenario_error(replace(kSmall, "weight: 500g", "weight: -1"));
  CHECK(neg.path() == "parts[0].weight");
  CHECK(std::string(neg.what()) == "parts[0].weight: must be positive");

  const auto path = scenario_error(replace(kSmall, "to: b}", "to: nowhere}"));
  CHECK(path.path() == "paths[0].to");
  CHECK(std::string(path.what()).find("nowhere") != std::string::npos);

  const auto key = scenario_error(replace(kSmall, "name: tiny", "name: tiny\ncolour: red"));
  CHECK(std::string(key.what()).find("colour") != std::string::npos);

  const auto unit = scenario_error(replace(kSmall, "500g", "500lb"));
  CHECK(unit.path() == "parts[0].weight");

  const auto goal = scenario_error(replace(kSmall, "  - at(box, b)", "  - holding(w, box)"));
  CHECK(std::string(goal.what()).find("goal") != std::string::npos);

  CHECK_THROWS_AS(parse_scenario("agents: [1, 2"), ScenarioError);
  CHECK_THROWS_AS(parse_scenario("- just a list"), ScenarioError);
  CHECK_THROWS_AS(load_scenario("/nonexistent/cell.yaml"), Error);
}

TEST_CASE("validation catches broken references") {
  auto cfg = builtin_benchmark(1);
  cfg.parts.push_back(cfg.parts.front());
  CHECK_THROWS_AS(cfg.validate(), ScenarioError);

  cfg = builtin_benchmark(1);
  cfg.goal.clear();
  CHECK_THROWS_WITH_AS(cfg.validate(), "goal: empty goal", ScenarioError);

  cfg = builtin_benchmark(1);
  cfg.agents[0].start = "mars";
  CHECK_THROWS_AS(cfg.validate(), ScenarioError);
}

TEST_CASE("information tags become identifiers") {
  CHECK(info_object_name("coord(base_1)") == "coord_base_1");
  CHECK(info_object_name("plain") == "plain");
}

TEST_CASE("knowledge gating in the compiled benchmark") {
  const auto compiled = compile(builtin_benchmark(1));
  const auto& task = compiled.grounded;
  const auto knows = task.find_proposition({"knows", {"robot2", "coord_base_1"}});
  REQUIRE(knows.has_value());

  std::size_t gated = 0;
  for (const auto& op : task.ops) {
    const bool is_robot2_place =
        (op.schema == "place" || op.schema == "place-informed") && op.args[0] == "robot2" && op.args[2] == "workspace";
    if (is_robot2_place) {
      CHECK(op.schema == "place-informed");
      CHECK(std::binary_search(op.pre.begin(), op.pre.end(), *knows));
      ++gated;
    }
    if (std::binary_search(op.add.begin(), op.add.end(), *knows)) CHECK(op.schema == "cooperate-guide");
  }
  CHECK(gated > 0);
  REQUIRE(task.find_op("place-informed robot2 ring_1 workspace coord_base_1") != nullptr);
  CHECK(task.find_op("place robot2 ring_1 workspace") == nullptr);

  // Without cooperation robot2 never learns where to place.
  pddl::GroundedTask solo = task;
  std::erase_if(solo.ops, [](const pddl::GroundedOp& op) { return op.schema == "cooperate-guide"; });
  solo.goal = {*knows};
  CHECK(planner::brute_force_optimal(solo).status == planner::BruteForceResult::Status::Unreachable);
}

TEST_CASE("compiled problems") {
  const auto two = compile(builtin_benchmark(2));
  CHECK(two.problem.goal.size() == 2);
  for (const auto& g : two.problem.goal) {
    CHECK(g.predicate == "at");
    CHECK(g.args[1] == "storage_3");
  }
  CHECK(two.problem.minimize_total_cost);

  auto no_robots = parse_scenario(kSmall);
  const auto plain = compile(no_robots);
  for (const auto& a : plain.problem.init) CHECK(a.predicate != "knows");
  for (const auto& a : plain.grounded.propositions) CHECK(a.predicate != "knows");
  CHECK(planner::plan_search(plain.grounded).solved);
}

TEST_CASE("emitted PDDL round-trips and grounds identically") {
  for (int cycles : {1, 2}) {
    const auto compiled = compile(builtin_benchmark(cycles));
    const auto domain = pddl::parse_domain(pddl::emit_domain(compiled.domain));
    CHECK(domain == compiled.domain);
    const auto problem = pddl::parse_problem(pddl::emit_problem(compiled.problem), &domain);
    CHECK(problem == compiled.problem);

    const auto regrounded = pddl::ground(domain, problem, pddl::fluent_cost_provider(problem));
    CHECK(regrounded == compiled.grounded);
  }
}

TEST_CASE("compilation is deterministic") {
  const auto a = compile(load_scenario(kCell));
  const auto b = compile(load_scenario(kCell));
  CHECK(a.domain == b.domain);
  CHECK(a.problem == b.problem);
  CHECK(a.grounded == b.grounded);
  CHECK(pddl::emit_problem(a.problem) == pddl::emit_problem(b.problem));
}

TEST_CASE("reach models fill in missing indices") {
  auto cfg = builtin_benchmark(1);
  const AgentSpec& r1 = *cfg.find_agent("robot1");
  CHECK(reach_index_at(cfg, r1, cfg.find_location("workspace")->position) == 54.5);
  CHECK_THROWS_AS(reach_index_at(cfg, r1, {0.1, 0.1, 0.0}), Error);
  cfg.reach_models.push_back({"robot1", 0.4, 0.3, 1.5, 300, 2, 0.02});
  const double d = reach_index_at(cfg, r1, {0.3, 0.3, 0.0});
  CHECK(d >= 0.0);
  CHECK(d <= 100.0);
  CHECK(d == reach_index_at(cfg, r1, {0.3, 0.3, 0.0}));
}
