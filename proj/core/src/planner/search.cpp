#include "hrcplan/planner/search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <string>

namespace hrcplan::planner {

namespace {

constexpr double kTicksPerUnit = 1e9;
constexpr double kMaxCost = 1e6;

/// h_max with per-task tables built once.
class HMax {
 public:
  explicit HMax(const pddl::GroundedTask& task) : task_(task), users_(task.propositions.size()) {
    for (std::size_t i = 0; i < task.ops.size(); ++i) {
      cost_.push_back(to_ticks(task.ops[i].cost));
      for (PropId p : task.ops[i].pre) users_[p].push_back(i);
      if (task.ops[i].pre.empty()) free_ops_.push_back(i);
    }
  }

  Ticks operator()(const State& s) {
    if (task_.goal.empty()) return 0;
    const std::size_t n = task_.propositions.size();
    dist_.assign(n, kInfiniteTicks);
    remaining_.resize(task_.ops.size());
    for (std::size_t i = 0; i < task_.ops.size(); ++i) remaining_[i] = task_.ops[i].pre.size();
    is_goal_.assign(n, false);
    for (PropId g : task_.goal) is_goal_[g] = true;
    std::size_t goals_left = task_.goal.size();

    using Item = std::pair<Ticks, PropId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    auto relax = [&](PropId p, Ticks d) {
      if (d < dist_[p]) {
        dist_[p] = d;
        heap.push({d, p});
      }
    };
    for (PropId p = 0; p < n; ++p)
      if (s.test(p)) relax(p, 0);
    for (std::size_t o : free_ops_)
      for (PropId q : task_.ops[o].add) relax(q, cost_[o]);

    Ticks worst = 0;
    while (!heap.empty()) {
      auto [d, p] = heap.top();
      heap.pop();
      if (d > dist_[p]) continue;
      if (is_goal_[p]) {
        is_goal_[p] = false;
        worst = std::max(worst, d);
        if (--goals_left == 0) return worst;
      }
      // Props settle in nondecreasing order, so the last precondition settled is the max.
      for (std::size_t o : users_[p]) {
        if (--remaining_[o] != 0) continue;
        for (PropId q : task_.ops[o].add) relax(q, d + cost_[o]);
      }
    }
    return kInfiniteTicks;
  }

  Ticks op_cost(std::size_t i) const { return cost_[i]; }

 private:
  const pddl::GroundedTask& task_;
  std::vector<std::vector<std::size_t>> users_;
  std::vector<std::size_t> free_ops_;
  std::vector<Ticks> cost_;
  std::vector<Ticks> dist_;
  std::vector<std::size_t> remaining_;
  std::vector<bool> is_goal_;
};

/// Operators as bit masks for fast successor generation.
class Successors {
 public:
  explicit Successors(const pddl::GroundedTask& task) : universe_(task.propositions.size()) {
    for (const auto& op : task.ops) {
      pre_.push_back(State::from(universe_, op.pre).words());
      neg_.push_back(State::from(universe_, op.pre_neg).words());
      add_.push_back(State::from(universe_, op.add).words());
      keep_.push_back(State::from(universe_, op.del).words());
      for (auto& w : keep_.back()) w = ~w;
    }
  }

  bool applicable(const State& s, std::size_t i) const {
    const auto& w = s.words();
    for (std::size_t k = 0; k < w.size(); ++k) {
      if ((w[k] & pre_[i][k]) != pre_[i][k]) return false;
      if (w[k] & neg_[i][k]) return false;
    }
    return true;
  }

  State apply(const State& s, std::size_t i) const {
    std::vector<std::uint64_t> w = s.words();
    for (std::size_t k = 0; k < w.size(); ++k) w[k] = (w[k] & keep_[i][k]) | add_[i][k];
    return State::from_words(universe_, std::move(w));
  }

  std::size_t size() const { return pre_.size(); }

 private:
  std::size_t universe_;
  std::vector<std::vector<std::uint64_t>> pre_, neg_, add_, keep_;
};

}  // namespace

Ticks to_ticks(ExtCost c) {
  if (c.is_infinite()) throw Error("infinite cost has no tick value");
  if (c.value() > kMaxCost) throw Error("cost " + c.to_string() + " too large for exact search");
  return static_cast<Ticks>(std::llround(c.value() * kTicksPerUnit));
}

ExtCost from_ticks(Ticks t) {
  if (t == kInfiniteTicks) return ExtCost::infinity();
  return ExtCost(static_cast<double>(t) / kTicksPerUnit);
}

Ticks h_max_ticks(const pddl::GroundedTask& task, const State& s) { return HMax(task)(s); }

ExtCost h_max(const pddl::GroundedTask& task, const State& s) { return from_ticks(h_max_ticks(task, s)); }

BudgetExhausted::BudgetExhausted(std::size_t expansions, ExtCost bound)
    : Error("budget exhausted after " + std::to_string(expansions) + " expansions (best-known bound " +
            bound.to_string() + ")"),
      bound_(bound) {}

SearchResult plan_search(const pddl::GroundedTask& task, const SearchOptions& options) {
  HMax heuristic(task);
  Successors succ(task);

  std::vector<std::uint32_t> rank(task.ops.size());
  {
    std::vector<std::string> names;
    for (const auto& op : task.ops) names.push_back(op.name());
    std::vector<std::size_t> order(task.ops.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return names[a] < names[b]; });
    for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = static_cast<std::uint32_t>(r);
  }

  struct Node {
    Ticks g;
    Ticks h;
    std::size_t parent;
    std::size_t op;
    bool expanded = false;
  };
  constexpr std::size_t kNone = SIZE_MAX;
  std::vector<Node> nodes;
  std::vector<State> states;
  std::unordered_map<State, std::size_t, StateHash> index;

  struct Entry {
    Ticks f;
    Ticks h;
    std::uint32_t rank;
    std::uint64_t seq;
    std::size_t node;
    Ticks g;
  };
  auto worse = [](const Entry& a, const Entry& b) {
    if (a.f != b.f) return a.f > b.f;
    if (a.h != b.h) return a.h > b.h;
    if (a.rank != b.rank) return a.rank > b.rank;
    return a.seq > b.seq;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> open(worse);
  std::uint64_t seq = 0;

  SearchResult result;
  State init = initial_state(task);
  const Ticks h0 = heuristic(init);
  if (h0 == kInfiniteTicks) return result;
  nodes.push_back({0, h0, kNone, kNone});
  states.push_back(init);
  index.emplace(init, 0);
  open.push({h0, h0, 0, seq++, 0, 0});
  result.generated = 1;

  while (!open.empty()) {
    const Entry top = open.top();
    open.pop();
    if (top.g != nodes[top.node].g) continue;
    const std::size_t id = top.node;
    if (is_goal(task, states[id])) {
      result.solved = true;
      result.cost_ticks = nodes[id].g;
      for (std::size_t n = id; nodes[n].parent != kNone; n = nodes[n].parent) result.plan.push_back(nodes[n].op);
      std::reverse(result.plan.begin(), result.plan.end());
      result.cost = plan_cost(task, result.plan);
      return result;
    }
    if (result.expanded >= options.max_expansions) throw BudgetExhausted(result.expanded, from_ticks(top.f));
    ++result.expanded;
    nodes[id].expanded = true;
    for (std::size_t i = 0; i < succ.size(); ++i) {
      if (!succ.applicable(states[id], i)) continue;
      State next = succ.apply(states[id], i);
      const Ticks g = nodes[id].g + heuristic.op_cost(i);
      auto it = index.find(next);
      std::size_t nid;
      if (it == index.end()) {
        const Ticks h = heuristic(next);
        nid = nodes.size();
        nodes.push_back({g, h, id, i});
        index.emplace(next, nid);
        states.push_back(std::move(next));
        ++result.generated;
        if (h == kInfiniteTicks) continue;
      } else {
        nid = it->second;
        if (nodes[nid].h == kInfiniteTicks) continue;
        if (g == nodes[nid].g && !nodes[nid].expanded && rank[i] < rank[nodes[nid].op]) {
          // Equal-cost path through a smaller action name.
          nodes[nid].parent = id;
          nodes[nid].op = i;
          continue;
        }
        if (g >= nodes[nid].g) continue;
        nodes[nid].g = g;
        nodes[nid].parent = id;
        nodes[nid].op = i;
      }
      open.push({g + nodes[nid].h, nodes[nid].h, rank[i], seq++, nid, g});
    }
  }
  return result;
}

BruteForceResult brute_force_optimal(const pddl::GroundedTask& task, std::size_t node_limit) {
  Successors succ(task);
  std::vector<Ticks> cost;
  for (const auto& op : task.ops) cost.push_back(to_ticks(op.cost));

  std::vector<State> states;
  std::vector<Ticks> g;
  std::unordered_map<State, std::size_t, StateHash> index;
  using Item = std::pair<Ticks, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;

  BruteForceResult result;
  states.push_back(initial_state(task));
  g.push_back(0);
  index.emplace(states.front(), 0);
  open.push({0, 0});
  while (!open.empty()) {
    auto [d, id] = open.top();
    open.pop();
    if (d != g[id]) continue;
    if (is_goal(task, states[id])) {
      result.status = BruteForceResult::Status::Optimal;
      result.cost_ticks = d;
      result.states = states.size();
      return result;
    }
    for (std::size_t i = 0; i < succ.size(); ++i) {
      if (!succ.applicable(states[id], i)) continue;
      State next = succ.apply(states[id], i);
      const Ticks nd = d + cost[i];
      auto it = index.find(next);
      if (it == index.end()) {
        if (states.size() >= node_limit) {
          result.status = BruteForceResult::Status::LimitReached;
          result.states = states.size();
          return result;
        }
        index.emplace(next, states.size());
        open.push({nd, states.size()});
        states.push_back(std::move(next));
        g.push_back(nd);
      } else if (nd < g[it->second]) {
        g[it->second] = nd;
        open.push({nd, it->second});
      }
    }
  }
  result.status = BruteForceResult::Status::Unreachable;
  result.states = states.size();
  return result;
}

std::optional<std::unordered_map<State, Ticks, StateHash>> cost_to_go(const pddl::GroundedTask& task,
                                                                      std::size_t node_limit) {
  Successors succ(task);
  std::vector<State> states{initial_state(task)};
  std::unordered_map<State, std::size_t, StateHash> index{{states.front(), 0}};
  // Reverse edges: for each state, (predecessor, cost).
  std::vector<std::vector<std::pair<std::size_t, Ticks>>> preds(1);
  for (std::size_t id = 0; id < states.size(); ++id) {
    for (std::size_t i = 0; i < succ.size(); ++i) {
      if (!succ.applicable(states[id], i)) continue;
      State next = succ.apply(states[id], i);
      auto it = index.find(next);
      std::size_t nid;
      if (it == index.end()) {
        if (states.size() >= node_limit) return std::nullopt;
        nid = states.size();
        index.emplace(next, nid);
        states.push_back(std::move(next));
        preds.emplace_back();
      } else {
        nid = it->second;
      }
      preds[nid].push_back({id, to_ticks(task.ops[i].cost)});
    }
  }
  std::vector<Ticks> dist(states.size(), kInfiniteTicks);
  using Item = std::pair<Ticks, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (std::size_t id = 0; id < states.size(); ++id) {
    if (is_goal(task, states[id])) {
      dist[id] = 0;
      heap.push({0, id});
    }
  }
  while (!heap.empty()) {
    auto [d, id] = heap.top();
    heap.pop();
    if (d != dist[id]) continue;
    for (auto [p, c] : preds[id]) {
      if (d + c < dist[p]) {
        dist[p] = d + c;
        heap.push({dist[p], p});
      }
    }
  }
  std::unordered_map<State, Ticks, StateHash> out;
  for (std::size_t id = 0; id < states.size(); ++id) out.emplace(std::move(states[id]), dist[id]);
  return out;
}

ExtCost plan_cost(const pddl::GroundedTask& task, const std::vector<std::size_t>& plan) {
  State s = initial_state(task);
  ExtCost total;
  for (std::size_t i : plan) {
    if (i >= task.ops.size()) throw Error("plan refers to an unknown operator");
    s = apply(s, task.ops[i]);
    total += task.ops[i].cost;
  }
  return total;
}

}  // namespace hrcplan::planner
