#include "hrcplan/planner/lift.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "hrcplan/error.hpp"
#include "hrcplan/planner/state.hpp"

namespace hrcplan::planner {

bool PrecedenceGraph::has_edge(std::size_t before, std::size_t after) const {
  return std::any_of(edges.begin(), edges.end(),
                     [&](const Precedence& e) { return e.before == before && e.after == after; });
}

std::vector<std::vector<std::size_t>> PrecedenceGraph::predecessors() const {
  std::vector<std::vector<std::size_t>> preds(steps);
  for (const auto& e : edges) preds[e.after].push_back(e.before);
  return preds;
}

namespace {

bool contains(const std::vector<pddl::PropId>& set, pddl::PropId p) {
  return std::binary_search(set.begin(), set.end(), p);
}

}  // namespace

PrecedenceGraph partial_order_lift(const pddl::GroundedTask& task, std::span<const std::size_t> plan) {
  PrecedenceGraph g;
  g.steps = plan.size();
  g.ops.assign(plan.begin(), plan.end());

  State s = initial_state(task);
  for (std::size_t j = 0; j < plan.size(); ++j) {
    if (plan[j] >= task.ops.size()) throw Error("plan step " + std::to_string(j) + " refers to an unknown operator");
    const auto& op = task.ops[plan[j]];
    if (!applicable(s, op)) throw Error("plan step " + std::to_string(j) + " (" + op.name() + ") is not applicable");
    s = apply(s, op);
  }
  if (!is_goal(task, s)) throw Error("plan does not reach the goal");

  auto latest_adder = [&](std::size_t before, pddl::PropId p) {
    for (std::size_t i = before; i-- > 0;)
      if (contains(task.ops[plan[i]].add, p)) return i;
    return kInitStep;
  };
  for (std::size_t j = 0; j < plan.size(); ++j)
    for (pddl::PropId p : task.ops[plan[j]].pre) g.links.push_back({latest_adder(j, p), j, p});
  for (pddl::PropId p : task.goal) g.links.push_back({latest_adder(plan.size(), p), kGoalStep, p});

  std::set<std::pair<std::size_t, std::size_t>> seen;
  auto order = [&](std::size_t a, std::size_t b, EdgeKind kind) {
    if (a == b || a == kInitStep || b == kGoalStep) return;
    if (a > b) std::swap(a, b);
    if (seen.insert({a, b}).second) g.edges.push_back({a, b, kind});
  };

  for (const auto& link : g.links) {
    if (link.producer != kInitStep && link.consumer != kGoalStep) order(link.producer, link.consumer, EdgeKind::Causal);
    for (std::size_t k = 0; k < plan.size(); ++k) {
      if (k == link.producer || k == link.consumer) continue;
      if (!contains(task.ops[plan[k]].del, link.prop)) continue;
      // A valid sequential plan has no deleter inside a link, so k lies on one side.
      if (link.producer != kInitStep && k < link.producer)
        order(k, link.producer, EdgeKind::Threat);
      else if (link.consumer != kGoalStep && k > link.consumer)
        order(link.consumer, k, EdgeKind::Threat);
      else if (link.producer == kInitStep && link.consumer != kGoalStep)
        order(link.consumer, k, EdgeKind::Threat);
    }
  }
  for (std::size_t j = 0; j < plan.size(); ++j) {
    for (pddl::PropId q : task.ops[plan[j]].pre_neg) {
      for (std::size_t k = 0; k < plan.size(); ++k) {
        const auto& other = task.ops[plan[k]];
        if (contains(other.add, q) || contains(other.del, q)) order(std::min(j, k), std::max(j, k), EdgeKind::Negative);
      }
      // Earlier adders of q stay ahead of the deleter that makes q false for step j.
      std::size_t deleter = j;
      while (deleter-- > 0 && !contains(task.ops[plan[deleter]].del, q)) {
      }
      if (deleter == static_cast<std::size_t>(-1)) continue;
      for (std::size_t k = 0; k < deleter; ++k)
        if (contains(task.ops[plan[k]].add, q)) order(k, deleter, EdgeKind::Negative);
    }
  }
  std::map<std::string, std::size_t> last_step_of;
  for (std::size_t j = 0; j < plan.size(); ++j) {
    for (const auto& agent : task.ops[plan[j]].agents) {
      auto it = last_step_of.find(agent);
      if (it != last_step_of.end()) order(it->second, j, EdgeKind::Agent);
      last_step_of[agent] = j;
    }
  }
  std::sort(g.edges.begin(), g.edges.end(), [](const Precedence& a, const Precedence& b) {
    return a.before != b.before ? a.before < b.before : a.after < b.after;
  });
  return g;
}

Schedule schedule(const PrecedenceGraph& graph, std::span<const double> durations_s) {
  if (durations_s.size() != graph.steps) throw Error("one duration per step required");
  const auto preds = graph.predecessors();
  // Kahn's algorithm; smallest index first keeps the result deterministic.
  std::vector<std::size_t> indegree(graph.steps, 0);
  std::vector<std::vector<std::size_t>> succs(graph.steps);
  for (const auto& e : graph.edges) {
    if (e.before >= graph.steps || e.after >= graph.steps) throw Error("edge refers to an unknown step");
    ++indegree[e.after];
    succs[e.before].push_back(e.after);
  }
  std::set<std::size_t> ready;
  for (std::size_t i = 0; i < graph.steps; ++i)
    if (indegree[i] == 0) ready.insert(i);
  Schedule out;
  out.start_s.assign(graph.steps, 0.0);
  std::size_t done = 0;
  while (!ready.empty()) {
    const std::size_t i = *ready.begin();
    ready.erase(ready.begin());
    ++done;
    for (std::size_t p : preds[i]) out.start_s[i] = std::max(out.start_s[i], out.start_s[p] + durations_s[p]);
    out.makespan = std::max(out.makespan, out.start_s[i] + durations_s[i]);
    for (std::size_t k : succs[i])
      if (--indegree[k] == 0) ready.insert(k);
  }
  if (done != graph.steps) throw Error("precedence graph has a cycle");
  return out;
}

pddl::TimedPlan make_timed_plan(const pddl::GroundedTask& task, std::span<const std::size_t> plan) {
  const PrecedenceGraph graph = partial_order_lift(task, plan);
  std::vector<double> durations;
  for (std::size_t i : plan) durations.push_back(task.ops[i].duration_s);
  const Schedule sched = schedule(graph, durations);
  pddl::TimedPlan timed;
  for (std::size_t j = 0; j < plan.size(); ++j) {
    const auto& op = task.ops[plan[j]];
    timed.steps.push_back({sched.start_s[j], op.schema, op.args, op.duration_s, op.cost});
  }
  timed.refresh();
  return timed;
}

}  // namespace hrcplan::planner
