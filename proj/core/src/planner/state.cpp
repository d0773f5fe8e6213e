#include "hrcplan/planner/state.hpp"

#include <algorithm>

#include "hrcplan/error.hpp"

namespace hrcplan::planner {

State State::from(std::size_t universe, std::span<const PropId> props) {
  State s(universe);
  for (PropId p : props) {
    if (p >= universe) throw Error("proposition index out of range");
    s.set(p);
  }
  return s;
}

State State::from_words(std::size_t universe, std::vector<std::uint64_t> words) {
  if (words.size() != (universe + 63) / 64) throw Error("bitset size does not match the universe");
  State s;
  s.universe_ = universe;
  s.words_ = std::move(words);
  return s;
}

bool State::contains_all(std::span<const PropId> props) const {
  return std::all_of(props.begin(), props.end(), [&](PropId p) { return test(p); });
}

bool State::contains_none(std::span<const PropId> props) const {
  return std::none_of(props.begin(), props.end(), [&](PropId p) { return test(p); });
}

std::vector<PropId> State::props() const {
  std::vector<PropId> out;
  for (PropId p = 0; p < universe_; ++p)
    if (test(p)) out.push_back(p);
  return out;
}

std::size_t StateHash::operator()(const State& s) const {
  std::uint64_t h = 0x9e3779b97f4a7c15ull ^ s.universe();
  for (std::uint64_t w : s.words()) {
    h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h *= 0xbf58476d1ce4e5b9ull;
  }
  return static_cast<std::size_t>(h ^ (h >> 31));
}

State initial_state(const pddl::GroundedTask& task) { return State::from(task.propositions.size(), task.init); }

bool is_goal(const pddl::GroundedTask& task, const State& s) { return s.contains_all(task.goal); }

bool applicable(const State& s, const pddl::GroundedOp& op) {
  return s.contains_all(op.pre) && s.contains_none(op.pre_neg);
}

State apply(const State& s, const pddl::GroundedOp& op) {
  if (!applicable(s, op)) throw Error("operator (" + op.name() + ") is not applicable");
  State next = s;
  for (PropId p : op.del) next.reset(p);
  for (PropId p : op.add) next.set(p);
  return next;
}

}  // namespace hrcplan::planner
