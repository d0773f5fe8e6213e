#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "hrcplan/pddl/task.hpp"

namespace hrcplan::planner {

using pddl::PropId;

/// Set of true propositions over a task's proposition universe, stored as a bitset.
class State {
 public:
  State() = default;
  explicit State(std::size_t universe) : universe_(universe), words_((universe + 63) / 64, 0) {}
  static State from(std::size_t universe, std::span<const PropId> props);
  /// Bits at or above `universe` must be clear.
  static State from_words(std::size_t universe, std::vector<std::uint64_t> words);

  std::size_t universe() const { return universe_; }
  bool test(PropId p) const { return (words_[p >> 6] >> (p & 63)) & 1u; }
  void set(PropId p) { words_[p >> 6] |= std::uint64_t{1} << (p & 63); }
  void reset(PropId p) { words_[p >> 6] &= ~(std::uint64_t{1} << (p & 63)); }
  bool contains_all(std::span<const PropId> props) const;
  bool contains_none(std::span<const PropId> props) const;
  std::vector<PropId> props() const;
  const std::vector<std::uint64_t>& words() const { return words_; }

  friend bool operator==(const State&, const State&) = default;

 private:
  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

struct StateHash {
  std::size_t operator()(const State& s) const;
};

State initial_state(const pddl::GroundedTask& task);
bool is_goal(const pddl::GroundedTask& task, const State& s);

/// Positive preconditions hold and negative ones do not.
bool applicable(const State& s, const pddl::GroundedOp& op);
/// (s minus deletes) plus adds. Throws hrcplan::Error if `op` is not applicable.
State apply(const State& s, const pddl::GroundedOp& op);

}  // namespace hrcplan::planner
