#pragma once

// Abstract syntax for the PDDL subset: typed STRIPS with negative preconditions, a
// `total-cost` metric and constant (or fluent) action durations. Identifiers are stored
// lower-case; variables keep their leading `?`.

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace hrcplan::pddl {

struct TypedName {
  std::string name;
  std::string type = "object";

  friend bool operator==(const TypedName&, const TypedName&) = default;
};

/// Predicate application. Arguments are variables (`?x`) in schemas, objects in problems.
struct Atom {
  std::string predicate;
  std::vector<std::string> args;

  std::string to_string() const;
  friend bool operator==(const Atom&, const Atom&) = default;
  friend auto operator<=>(const Atom&, const Atom&) = default;
};

struct Literal {
  Atom atom;
  bool negated = false;

  friend bool operator==(const Literal&, const Literal&) = default;
};

struct FluentTerm {
  std::string name;
  std::vector<std::string> args;

  friend bool operator==(const FluentTerm&, const FluentTerm&) = default;
};

/// A number or a numeric fluent reference.
using NumExpr = std::variant<double, FluentTerm>;

struct PredicateDecl {
  std::string name;
  std::vector<TypedName> params;

  friend bool operator==(const PredicateDecl&, const PredicateDecl&) = default;
};

struct FunctionDecl {
  std::string name;
  std::vector<TypedName> params;

  friend bool operator==(const FunctionDecl&, const FunctionDecl&) = default;
};

struct ActionSchema {
  std::string name;
  std::vector<TypedName> params;
  std::vector<Literal> precondition;
  std::vector<Atom> add;
  std::vector<Atom> del;
  /// Amount added to `total-cost`, if the action has a cost.
  std::optional<NumExpr> cost;
  /// Present for durative actions.
  std::optional<NumExpr> duration;

  friend bool operator==(const ActionSchema&, const ActionSchema&) = default;
};

struct DomainAst {
  std::string name;
  std::vector<std::string> requirements;
  /// (type, parent) pairs; parent `object` for roots.
  std::vector<TypedName> types;
  std::vector<PredicateDecl> predicates;
  std::vector<FunctionDecl> functions;
  std::vector<ActionSchema> actions;

  const ActionSchema* find_action(const std::string& name) const;
  const PredicateDecl* find_predicate(const std::string& name) const;
  /// True if `type` equals `ancestor` or descends from it.
  bool is_subtype(const std::string& type, const std::string& ancestor) const;
  bool has_type(const std::string& type) const;

  friend bool operator==(const DomainAst&, const DomainAst&) = default;
};

struct NumericInit {
  FluentTerm term;
  double value = 0.0;

  friend bool operator==(const NumericInit&, const NumericInit&) = default;
};

struct ProblemAst {
  std::string name;
  std::string domain_name;
  std::vector<TypedName> objects;
  std::vector<Atom> init;
  std::vector<NumericInit> numeric_init;
  std::vector<Atom> goal;
  bool minimize_total_cost = false;

  friend bool operator==(const ProblemAst&, const ProblemAst&) = default;
};

}  // namespace hrcplan::pddl
