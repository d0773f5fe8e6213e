#include "hrcplan/pddl/ast.hpp"

#include <algorithm>

namespace hrcplan::pddl {

std::string Atom::to_string() const {
  std::string s = "(" + predicate;
  for (const auto& a : args) s += " " + a;
  return s + ")";
}

const ActionSchema* DomainAst::find_action(const std::string& action) const {
  auto it = std::find_if(actions.begin(), actions.end(), [&](const ActionSchema& a) { return a.name == action; });
  return it == actions.end() ? nullptr : &*it;
}

const PredicateDecl* DomainAst::find_predicate(const std::string& predicate) const {
  auto it =
      std::find_if(predicates.begin(), predicates.end(), [&](const PredicateDecl& p) { return p.name == predicate; });
  return it == predicates.end() ? nullptr : &*it;
}

bool DomainAst::has_type(const std::string& type) const {
  if (type == "object") return true;
  return std::any_of(types.begin(), types.end(), [&](const TypedName& t) { return t.name == type; });
}

bool DomainAst::is_subtype(const std::string& type, const std::string& ancestor) const {
  std::string cur = type;
  for (std::size_t steps = 0; steps <= types.size() + 1; ++steps) {
    if (cur == ancestor) return true;
    if (cur == "object") return false;
    auto it = std::find_if(types.begin(), types.end(), [&](const TypedName& t) { return t.name == cur; });
    if (it == types.end()) return false;
    cur = it->type;
  }
  return false;
}

}  // namespace hrcplan::pddl
