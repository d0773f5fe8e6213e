#include "hrcplan/planner/validate.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include <nlohmann/json.hpp>

#include "hrcplan/planner/state.hpp"

namespace hrcplan::planner {

std::string ValidationReport::to_json() const {
  nlohmann::ordered_json j;
  j["ok"] = ok();
  if (violation) {
    j["step"] = violation->step;
    j["kind"] = violation->kind;
    j["detail"] = violation->detail;
  }
  return j.dump();
}

namespace {

constexpr double kEps = 1e-9;

bool intersects(const std::vector<PropId>& a, const std::vector<PropId>& b) {
  std::size_t i = 0;
  std::size_t k = 0;
  while (i < a.size() && k < b.size()) {
    if (a[i] == b[k]) return true;
    if (a[i] < b[k])
      ++i;
    else
      ++k;
  }
  return false;
}

}  // namespace

ValidationReport validate_plan(const pddl::GroundedTask& task, const pddl::TimedPlan& plan) {
  std::vector<pddl::PlanStep> steps = plan.steps;
  std::stable_sort(steps.begin(), steps.end(),
                   [](const pddl::PlanStep& a, const pddl::PlanStep& b) { return a.start_s < b.start_s; });
  ValidationReport report;
  auto fail = [&](std::size_t step, std::string kind, std::string detail) {
    report.violation = Violation{step, std::move(kind), std::move(detail)};
    return report;
  };

  std::vector<const pddl::GroundedOp*> ops;
  std::map<std::string, std::size_t> by_name;
  for (std::size_t i = 0; i < task.ops.size(); ++i) by_name.emplace(task.ops[i].name(), i);
  for (std::size_t j = 0; j < steps.size(); ++j) {
    auto it = by_name.find(steps[j].name());
    if (it == by_name.end()) return fail(j, "unknown action", "(" + steps[j].name() + ")");
    ops.push_back(&task.ops[it->second]);
  }

  auto prop = [&](PropId p) { return task.propositions[p].to_string(); };
  auto overlap = [&](std::size_t a, std::size_t b) {
    return steps[a].start_s < steps[b].end_s() - kEps && steps[b].start_s < steps[a].end_s() - kEps;
  };

  // Ends are applied in time order; equal end times in step order.
  std::vector<std::size_t> by_end(steps.size());
  std::iota(by_end.begin(), by_end.end(), 0);
  std::stable_sort(by_end.begin(), by_end.end(),
                   [&](std::size_t a, std::size_t b) { return steps[a].end_s() < steps[b].end_s(); });
  std::size_t ended = 0;
  State s = initial_state(task);
  auto finish = [&](std::size_t k) {
    for (PropId p : ops[k]->del) s.reset(p);
    for (PropId p : ops[k]->add) s.set(p);
  };

  for (std::size_t j = 0; j < steps.size(); ++j) {
    const auto& op = *ops[j];
    for (std::size_t i = 0; i < j; ++i) {
      if (!overlap(i, j)) continue;
      const auto& other = *ops[i];
      for (const auto& agent : op.agents) {
        if (std::find(other.agents.begin(), other.agents.end(), agent) != other.agents.end())
          return fail(j, "agent overlap", agent + " in (" + steps[i].name() + ") and (" + steps[j].name() + ")");
      }
      if (intersects(other.del, op.pre) || intersects(op.del, other.pre) || intersects(other.add, op.pre_neg) ||
          intersects(op.add, other.pre_neg))
        return fail(j, "interference", "(" + steps[i].name() + ") and (" + steps[j].name() + ") overlap");
    }
    while (ended < by_end.size() && steps[by_end[ended]].end_s() <= steps[j].start_s + kEps) finish(by_end[ended++]);
    for (PropId p : op.pre)
      if (!s.test(p)) return fail(j, "precondition", "(" + steps[j].name() + ") needs " + prop(p));
    for (PropId p : op.pre_neg)
      if (s.test(p)) return fail(j, "precondition", "(" + steps[j].name() + ") needs not " + prop(p));
  }
  while (ended < by_end.size()) finish(by_end[ended++]);
  for (PropId p : task.goal)
    if (!s.test(p)) return fail(steps.size(), "goal", "goal " + prop(p) + " does not hold");
  return report;
}

}  // namespace hrcplan::planner
