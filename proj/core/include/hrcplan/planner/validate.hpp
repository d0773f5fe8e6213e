#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "hrcplan/pddl/plan.hpp"
#include "hrcplan/pddl/task.hpp"

namespace hrcplan::planner {

struct Violation {
  /// Index into the plan's steps (sorted by start); the step count for goal violations.
  std::size_t step = 0;
  /// `unknown action`, `agent overlap`, `interference`, `precondition`, `goal`.
  std::string kind;
  std::string detail;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationReport {
  std::optional<Violation> violation;

  bool ok() const { return !violation.has_value(); }
  /// `{"ok": true}` or `{"ok": false, "step": .., "kind": .., "detail": ..}`.
  std::string to_json() const;
};

/// Replays the timed plan. Effects take hold when a step ends; a step's preconditions
/// must hold in the state left by every step that has ended by its start. Steps that
/// share an agent must not overlap, and overlapping steps must not delete each other's
/// preconditions or add each other's negative ones. The final state must satisfy the goal.
/// Reports the first violation found.
ValidationReport validate_plan(const pddl::GroundedTask& task, const pddl::TimedPlan& plan);

}  // namespace hrcplan::planner
