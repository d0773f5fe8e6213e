#pragma once

#include <string_view>

#include "hrcplan/pddl/ast.hpp"

namespace hrcplan::pddl {

/// Parses a domain. `;` comments run to end of line; keywords and identifiers are
/// case-insensitive and stored lower-case. Throws hrcplan::ParseError with the position
/// of the offending token.
DomainAst parse_domain(std::string_view text);

/// Parses a problem. With `domain`, object types and init/goal predicates are checked
/// against it as well.
ProblemAst parse_problem(std::string_view text, const DomainAst* domain = nullptr);

/// Canonical text; parse_domain(emit_domain(d)) == d. Actions with a duration are
/// written as PDDL 2.1 durative actions (conditions `at start`, effects `at end`).
std::string emit_domain(const DomainAst& domain);
std::string emit_problem(const ProblemAst& problem);

}  // namespace hrcplan::pddl
