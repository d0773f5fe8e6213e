#pragma once

// Partial-order lift of a sequential plan and earliest-start scheduling.

#include <cstddef>
#include <span>
#include <vector>

#include "hrcplan/pddl/plan.hpp"
#include "hrcplan/pddl/task.hpp"

namespace hrcplan::planner {

/// Marks the initial state as producer or the goal as consumer of a link.
inline constexpr std::size_t kInitStep = static_cast<std::size_t>(-1);
inline constexpr std::size_t kGoalStep = static_cast<std::size_t>(-2);

struct CausalLink {
  std::size_t producer;
  std::size_t consumer;
  pddl::PropId prop;

  friend bool operator==(const CausalLink&, const CausalLink&) = default;
};

enum class EdgeKind { Causal, Threat, Negative, Agent };

struct Precedence {
  std::size_t before;
  std::size_t after;
  EdgeKind kind;

  friend bool operator==(const Precedence&, const Precedence&) = default;
};

struct PrecedenceGraph {
  std::size_t steps = 0;
  /// Plan step -> task op index.
  std::vector<std::size_t> ops;
  std::vector<CausalLink> links;
  /// Between plan steps only, `before < after`, one entry per ordered pair (the first
  /// reason found wins).
  std::vector<Precedence> edges;

  bool has_edge(std::size_t before, std::size_t after) const;
  std::vector<std::vector<std::size_t>> predecessors() const;
};

/// Causal links from the latest earlier achiever (or the initial state), threat edges
/// placing deleters outside the links they threaten, sequential order kept between a
/// step with a negative precondition and every step touching that proposition (with
/// earlier adders ahead of the deleter the step relies on), and
/// sequential order kept between steps that share an agent. Throws hrcplan::Error if
/// the plan is not executable.
PrecedenceGraph partial_order_lift(const pddl::GroundedTask& task, std::span<const std::size_t> plan);

struct Schedule {
  std::vector<double> start_s;
  double makespan = 0.0;
};

/// Earliest start: each step begins when its last predecessor finishes.
Schedule schedule(const PrecedenceGraph& graph, std::span<const double> durations_s);

/// Lift, schedule with the ops' durations and render as a timed plan.
pddl::TimedPlan make_timed_plan(const pddl::GroundedTask& task, std::span<const std::size_t> plan);

}  // namespace hrcplan::planner
