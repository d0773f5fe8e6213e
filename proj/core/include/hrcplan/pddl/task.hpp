#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hrcplan/ext_cost.hpp"
#include "hrcplan/pddl/ast.hpp"

namespace hrcplan::pddl {

using PropId = std::size_t;

struct GroundedOp {
  std::string schema;
  std::vector<std::string> args;
  /// Sorted, duplicate-free proposition indices.
  std::vector<PropId> pre;
  std::vector<PropId> pre_neg;
  std::vector<PropId> add;
  std::vector<PropId> del;
  /// Always finite: infinite-cost instantiations never reach a task.
  ExtCost cost;
  double duration_s = 1.0;
  /// Arguments whose type descends from `agent`.
  std::vector<std::string> agents;

  /// `schema arg1 arg2 ...`
  std::string name() const;
  friend bool operator==(const GroundedOp&, const GroundedOp&) = default;
};

/// Propositional planning task.
struct GroundedTask {
  std::vector<Atom> propositions;
  std::vector<GroundedOp> ops;
  std::vector<PropId> init;
  std::vector<PropId> goal;

  std::optional<PropId> find_proposition(const Atom& atom) const;
  /// Lookup by `name()`.
  const GroundedOp* find_op(const std::string& name) const;
  std::optional<std::size_t> find_op_index(const std::string& name) const;
  /// Throws hrcplan::Error on index out of range, unsorted sets or infinite costs.
  void validate() const;
  friend bool operator==(const GroundedTask&, const GroundedTask&) = default;
};

/// Cost of an instantiation of `schema` with `args`. Returns nullopt when the provider
/// has no entry (the grounder reports that as an error) and infinity to drop the action.
using CostProvider =
    std::function<std::optional<ExtCost>(const ActionSchema& schema, std::span<const std::string> args)>;

/// Evaluates each schema's cost expression against the problem's numeric init. An
/// undefined fluent makes the action inapplicable, i.e. infinite.
CostProvider fluent_cost_provider(const ProblemAst& problem);

struct GroundOptions {
  /// Drop operators and propositions not reachable in the delete relaxation.
  bool prune_unreachable = true;
  /// Duration of actions without a :duration.
  double default_duration_s = 1.0;
};

/// Enumerates every type-consistent instantiation, evaluates static predicates against
/// the initial state, drops infinite-cost actions and (optionally) relaxed-unreachable
/// ones. Actions without a cost expression cost 0 and never consult `costs`.
GroundedTask ground(const DomainAst& domain, const ProblemAst& problem, const CostProvider& costs,
                    const GroundOptions& options = {});

/// Predicates that no action adds or deletes.
std::vector<std::string> static_predicates(const DomainAst& domain);

}  // namespace hrcplan::pddl
