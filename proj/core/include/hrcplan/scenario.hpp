#pragma once

// Declarative description of a collaborative cell and its compilation into a planning
// task: scenario -> cost table -> PDDL domain/problem -> grounded task.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hrcplan/cost.hpp"
#include "hrcplan/model.hpp"
#include "hrcplan/pddl/ast.hpp"
#include "hrcplan/pddl/task.hpp"

namespace hrcplan {

struct Durations {
  double pick = 2.0;
  double place = 2.0;
  double move = 10.0;
  double cooperate = 15.0;
  double assemble = 5.0;

  double of(ActionKind kind) const;
  friend bool operator==(const Durations&, const Durations&) = default;
};

/// Two input parts at `at` become `output`.
struct AssembleRule {
  std::vector<std::string> inputs;
  std::string output;
  std::string at;

  friend bool operator==(const AssembleRule&, const AssembleRule&) = default;
};

/// Planar two-link arm used to compute D where a location gives no explicit index.
struct ReachModel {
  std::string robot;
  double link1_m = 0.0;
  double link2_m = 0.0;
  double max_tilt_rad = 0.0;
  std::size_t samples = 200;
  std::uint64_t seed = 0;
  double radius_m = 0.02;

  friend bool operator==(const ReachModel&, const ReachModel&) = default;
};

struct ScenarioConfig {
  std::string name = "cell";
  std::vector<AgentSpec> agents;
  std::vector<PartSpec> parts;
  std::vector<LocationSpec> locations;
  std::vector<PathSpec> paths;
  CostGains gains;
  InfoRequirements info_reqs;
  /// Activity level for the safety cost, keyed `agent@site` or `site` (agent-specific
  /// keys win). Sites are location or path ids.
  std::map<std::string, double> safety_d;
  Durations durations;
  /// Ground atoms over `at` and `ee_at`.
  std::vector<pddl::Atom> goal;
  std::vector<AssembleRule> assemble;
  std::vector<ReachModel> reach_models;

  const AgentSpec* find_agent(std::string_view id) const;
  const PartSpec* find_part(std::string_view id) const;
  const LocationSpec* find_location(std::string_view id) const;
  const PathSpec* find_path(std::string_view id) const;
  const ReachModel* find_reach_model(std::string_view robot) const;
  /// Path between two locations in either direction.
  const PathSpec* path_between(std::string_view a, std::string_view b) const;

  /// Throws ScenarioError with a document path for the first problem found.
  void validate() const;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Reachability index of `robot` at `p`: an explicit location index when `p` is that
/// location's position (within 1e-6 m), otherwise the robot's reach model. Throws when
/// neither is available.
double reach_index_at(const ScenarioConfig& cfg, const AgentSpec& robot, const Point3& p);

/// Information tags become PDDL identifiers: `coord(base_1)` -> `coord_base_1`.
std::string info_object_name(std::string_view tag);

/// Parses a scenario document (YAML). Lengths accept `cm`/`m`, masses `g`/`kg`, times `s`.
ScenarioConfig parse_scenario(std::string_view text);
ScenarioConfig load_scenario(const std::filesystem::path& file);

/// The two-robot, one-worker assembly cell; `cycles` (1 or 2) finished parts must end
/// up at storage_3.
ScenarioConfig builtin_benchmark(int cycles);

struct CompiledProblem {
  pddl::DomainAst domain;
  pddl::ProblemAst problem;
  pddl::GroundedTask grounded;
  CostTable cost_table;
};

/// Cost provider answering from a cost table built for `cfg`.
pddl::CostProvider table_cost_provider(const ScenarioConfig& cfg, const CostTable& table);

CompiledProblem compile(const ScenarioConfig& cfg);

}  // namespace hrcplan
