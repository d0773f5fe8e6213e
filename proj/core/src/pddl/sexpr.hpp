#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace hrcplan::pddl::detail {

/// Node of a parsed s-expression: either a symbol or a parenthesized list.
struct SExpr {
  bool is_list = false;
  std::string symbol;
  std::vector<SExpr> items;
  std::size_t line = 1;
  std::size_t column = 1;

  bool is_symbol() const { return !is_list; }
  bool is_symbol(std::string_view s) const { return !is_list && symbol == s; }
};

/// Reads exactly one top-level list. Symbols are lower-cased, `;` comments skipped.
SExpr read_sexpr(std::string_view text);

}  // namespace hrcplan::pddl::detail
