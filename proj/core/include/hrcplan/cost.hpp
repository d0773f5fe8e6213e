#pragma once

// Task-allocation cost model. For one agent performing one action:
//
//   C_agent = 1 + F_S + F_I + F_R + R_R + C_I + C_S
//
// where F_S, F_I and F_R are 0/infinity feasibility gates (strength, information,
// range), R_R penalizes awkward reach, C_I is the human intersection coefficient and
// C_S the safety cost. A cooperative action scales the mean of the members' solo
// costs by the cooperation criterion C_P.

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "hrcplan/ext_cost.hpp"
#include "hrcplan/model.hpp"

namespace hrcplan {

struct ScenarioConfig;

struct CostGains {
  /// Action-type risk gain C_K per agent kind.
  std::map<std::pair<AgentKind, ActionKind>, double> c_k;
  /// Intersection gain K_C.
  double k_c = 0.0;
  /// Cooperation coefficients.
  double c_h = 0.0;
  double c_r = 0.0;
  /// Also add C_I as a standalone term in C_agent. Off by default: C_S already
  /// consumes C_I for humans.
  bool double_count_ci = false;

  double risk(AgentKind agent, ActionKind action) const;
  /// Throws if any gain is negative or not finite.
  void validate() const;
  friend bool operator==(const CostGains&, const CostGains&) = default;
};

/// Information a robot needs before it can perform an action at a site.
class InfoRequirements {
 public:
  void require(const std::string& agent, ActionKind kind, const std::string& site, std::set<std::string> items);
  /// Empty set when nothing is required.
  const std::set<std::string>& lookup(const std::string& agent, ActionKind kind, const std::string& site) const;

  struct Entry {
    std::string agent;
    ActionKind kind;
    std::string site;
    std::set<std::string> items;
    friend bool operator==(const Entry&, const Entry&) = default;
  };
  std::vector<Entry> entries() const;

  friend bool operator==(const InfoRequirements&, const InfoRequirements&) = default;

 private:
  std::map<std::tuple<std::string, ActionKind, std::string>, std::set<std::string>> items_;
};

struct CostBreakdown {
  ExtCost f_s, f_i, f_r, r_r, c_i, c_s;
  ExtCost total;
  /// Intersection coefficient that entered C_S (humans only).
  double intersection = 0.0;
  /// False when a feasibility gate is infinite; R_R, C_I and C_S are then not evaluated
  /// and hold 0.
  bool determined = true;

  ExtCost feasibility() const { return f_s + f_i + f_r; }
};

/// S_a = 1 - W_P / S_L. May be negative.
double strength_criterion(const AgentSpec& agent, const PartSpec& part);

/// F_S: 0 if S_a > 0, infinity otherwise (a part exactly at the limit is infeasible).
ExtCost strength_cost(const AgentSpec& agent, const PartSpec& part);

/// F_I: humans always 0; robots 0 iff every required item is known.
ExtCost information_cost(const AgentSpec& agent, const std::set<std::string>& required);
ExtCost information_cost(const AgentSpec& agent, const GroundAction& action, const InfoRequirements& reqs);

/// F_R: humans 0; robots 0 iff `target` lies in their range.
ExtCost flexibility_cost(const AgentSpec& agent, const Point3& target);

/// Waypoint of `t` farthest from `base`; a MOVE is judged at this point.
Point3 farthest_point(const Trajectory& t, const Point3& base);

/// R_R: humans 0; robots 0 for d > 60, 1 - d/100 for 20 < d <= 60, 100/d for d <= 20
/// (infinity at d = 0).
ExtCost reachability_cost(const AgentSpec& agent, double d);

/// C_I: k_c if the worker's trajectory meets any robot range, else 0.
double intersection_coefficient(const Trajectory& worker_trajectory, std::span<const Region> robot_ranges, double k_c);

/// C_S: robots (1 + C_K) d/100, humans (C_I + C_K) d/100.
ExtCost safety_cost(const AgentSpec& agent, ActionKind kind, double d, double c_i, const CostGains& gains);

/// Everything agent_action_cost needs besides the agent.
struct ActionContext {
  ActionKind kind = ActionKind::Pick;
  const PartSpec* part = nullptr;
  /// Part location for PICK/PLACE, farthest trajectory point for MOVE.
  Point3 target;
  /// Reachability index at `target`; only consulted for robots inside their range.
  std::optional<double> reach_d;
  /// Activity level used by the safety cost.
  double safety_d = 0.0;
  /// Worker trajectory; a single point means the worker does not move.
  std::vector<Point3> worker_path;
  std::span<const Region> robot_ranges;
  std::set<std::string> required_info;
  /// Treat the required information as known (the post-knowledge phase).
  bool info_known = false;
  const CostGains* gains = nullptr;
};

/// C_agent with every component kept. Infeasibility is an infinite total, not an error.
CostBreakdown agent_action_cost(const AgentSpec& agent, const ActionContext& ctx);

/// C_P: (1 + C_H)^(n-1) all human, (1 + C_R)^(n-1) all robot, (1 + (C_H + C_R)/2)^(n-1) mixed.
double cooperation_criterion(std::span<const AgentKind> agents, const CostGains& gains);

/// C_total = C_P * mean of the members' solo costs. In a guided action (at least one
/// human) the robots' F_I is excluded from their solo cost: the guidance supplies it.
ExtCost cooperative_cost(std::span<const AgentSpec> agents, std::span<const ActionContext> solo_contexts,
                         const CostGains& gains);

enum class KnowledgePhase { Initial, Informed };

struct CostEntry {
  std::vector<std::string> agents;
  /// COOPERATE for joint rows.
  ActionKind kind = ActionKind::Pick;
  /// The action carried out: equal to `kind` for solo rows, PLACE for a guided placement.
  ActionKind base_kind = ActionKind::Pick;
  /// Location id, or path id for MOVE.
  std::string site;
  std::optional<std::string> part;
  KnowledgePhase phase = KnowledgePhase::Initial;
  /// True when the row has a twin in the other knowledge phase with a different F_I.
  bool state_dependent = false;
  CostBreakdown breakdown;
  std::vector<CostBreakdown> members;
  double cooperation = 1.0;
  ExtCost total;

  /// `site`, `site:part`, with `:informed` appended in the post-knowledge phase.
  std::string param() const;
};

class CostTable {
 public:
  void add(CostEntry e) { entries_.push_back(std::move(e)); }
  const std::vector<CostEntry>& entries() const { return entries_; }

  const CostEntry* find(const std::vector<std::string>& agents, ActionKind kind, const std::string& site,
                        const std::optional<std::string>& part, KnowledgePhase phase = KnowledgePhase::Initial) const;

  /// Header `agent,action,param,f_s,f_i,f_r,r_r,c_i,c_s,total`; infinity as `inf`,
  /// components that were not evaluated as `n/a`. Joint rows join agents with `+`.
  std::string to_csv() const;
  std::string to_json() const;
  /// Agent-by-site grid, one block for PICK/PLACE over locations and one for MOVE over
  /// paths. A cell lists the distinct totals of its rows (parts, knowledge phases, PICK
  /// and PLACE) in ascending order, separated by `/`.
  std::string to_matrix() const;

 private:
  std::vector<CostEntry> entries_;
};

/// Every (agent, PICK/PLACE, location, part), (agent, MOVE, path, part or none) row plus
/// guided placements (human, robot) at sites where the robot lacks information.
/// Throws hrcplan::Error naming any undeclared id.
CostTable build_cost_table(const ScenarioConfig& scenario);

}  // namespace hrcplan
