#pragma once

// Timed plan text format, one step per line:
//
//   0.000: (move robot1 storage_1 workspace base_1) [10.000]
//
// `;` starts a comment. Times are seconds, emitted with three decimals.

#include <string>
#include <string_view>
#include <vector>

#include "hrcplan/ext_cost.hpp"

namespace hrcplan::pddl {

struct PlanStep {
  double start_s = 0.0;
  std::string action;
  std::vector<std::string> args;
  double duration_s = 1.0;
  ExtCost cost;

  /// `action arg1 arg2 ...`, matching GroundedOp::name().
  std::string name() const;
  double end_s() const { return start_s + duration_s; }
  friend bool operator==(const PlanStep&, const PlanStep&) = default;
};

struct TimedPlan {
  /// Sorted by start time.
  std::vector<PlanStep> steps;
  double makespan = 0.0;
  ExtCost total_cost;

  /// Recomputes makespan and total cost from the steps.
  void refresh();
  friend bool operator==(const TimedPlan&, const TimedPlan&) = default;
};

/// Throws ParseError with the offending line. A missing `[duration]` means 1 second.
TimedPlan parse_plan(std::string_view text);
std::string emit_plan(const TimedPlan& plan);

}  // namespace hrcplan::pddl
