#pragma once

// Cost-optimal forward search. Costs are summed as integers of 1e-9 so that two plans
// of equal cost compare exactly equal regardless of summation order.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "hrcplan/error.hpp"
#include "hrcplan/planner/state.hpp"

namespace hrcplan::planner {

using Ticks = std::int64_t;
inline constexpr Ticks kInfiniteTicks = INT64_MAX;

/// Cost in units of 1e-9. Throws for infinite costs or costs above 1e6.
Ticks to_ticks(ExtCost c);
ExtCost from_ticks(Ticks t);

/// h_max over the delete relaxation; kInfiniteTicks when the goal is relaxed-unreachable.
Ticks h_max_ticks(const pddl::GroundedTask& task, const State& s);
ExtCost h_max(const pddl::GroundedTask& task, const State& s);

struct SearchOptions {
  /// Node expansions before giving up.
  std::size_t max_expansions = 5'000'000;
};

struct SearchResult {
  bool solved = false;
  /// Indices into task.ops, in execution order.
  std::vector<std::size_t> plan;
  Ticks cost_ticks = 0;
  ExtCost cost;
  std::size_t expanded = 0;
  std::size_t generated = 0;
};

class BudgetExhausted : public Error {
 public:
  BudgetExhausted(std::size_t expansions, ExtCost bound);
  /// Lowest f on the open list when the search stopped: a lower bound on the optimum.
  ExtCost bound() const { return bound_; }

 private:
  ExtCost bound_;
};

/// A* on f = g + h_max. Ties: smaller f, smaller h, lexicographically smaller producing
/// action name, earlier insertion. `solved == false` means no plan exists.
SearchResult plan_search(const pddl::GroundedTask& task, const SearchOptions& options = {});

struct BruteForceResult {
  enum class Status { Optimal, Unreachable, LimitReached };
  Status status = Status::LimitReached;
  Ticks cost_ticks = 0;
  std::size_t states = 0;
};

/// Uniform-cost enumeration with duplicate elimination. LimitReached once more than
/// `node_limit` distinct states have been generated.
BruteForceResult brute_force_optimal(const pddl::GroundedTask& task, std::size_t node_limit = 1'000'000);

/// Optimal cost-to-go for every state reachable from the initial state, or nullopt if
/// there are more than `node_limit` of them. Dead ends map to kInfiniteTicks.
std::optional<std::unordered_map<State, Ticks, StateHash>> cost_to_go(const pddl::GroundedTask& task,
                                                                      std::size_t node_limit = 1'000'000);

/// Sum of the plan's op costs; throws if an op is not applicable in sequence.
ExtCost plan_cost(const pddl::GroundedTask& task, const std::vector<std::size_t>& plan);

}  // namespace hrcplan::planner
