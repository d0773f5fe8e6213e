#include "sexpr.hpp"

#include <cctype>

#include "hrcplan/error.hpp"

namespace hrcplan::pddl::detail {

namespace {

constexpr std::size_t kMaxDepth = 512;

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::vector<SExpr> read_top(bool single) {
    std::vector<SExpr> out;
    skip_space();
    if (at_end()) throw ParseError("unexpected end of input", line_, column_);
    while (!at_end()) {
      if (single && !out.empty()) throw ParseError("unexpected token after end of definition", line_, column_);
      if (peek() != '(') throw ParseError("expected '('", line_, column_);
      out.push_back(read(0));
      skip_space();
    }
    return out;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_space() {
    while (!at_end()) {
      const char c = peek();
      if (c == ';') {
        while (!at_end() && peek() != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
        advance();
      } else {
        break;
      }
    }
  }

  static bool symbol_char(char c) {
    const auto u = static_cast<unsigned char>(c);
    if (u < 0x21 || u > 0x7e) return false;
    return c != '(' && c != ')' && c != ';';
  }

  SExpr read(std::size_t depth) {
    if (depth > kMaxDepth) throw ParseError("nesting too deep", line_, column_);
    SExpr node;
    node.line = line_;
    node.column = column_;
    if (peek() == '(') {
      node.is_list = true;
      advance();
      while (true) {
        skip_space();
        if (at_end()) throw ParseError("unexpected end of input", line_, column_);
        if (peek() == ')') {
          advance();
          return node;
        }
        node.items.push_back(read(depth + 1));
      }
    }
    if (peek() == ')') throw ParseError("unexpected ')'", line_, column_);
    if (!symbol_char(peek())) {
      const auto u = static_cast<unsigned char>(peek());
      std::string shown = std::isprint(u) ? std::string(1, peek()) : "\\x" + hex(u);
      throw ParseError("invalid character '" + shown + "'", line_, column_);
    }
    while (!at_end() && symbol_char(peek())) {
      node.symbol.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(peek()))));
      advance();
    }
    if (!at_end()) {
      const char c = peek();
      const auto u = static_cast<unsigned char>(c);
      const bool delimiter = c == '(' || c == ')' || c == ';' || std::isspace(u);
      if (!delimiter) {
        std::string shown = std::isprint(u) ? std::string(1, c) : "\\x" + hex(u);
        throw ParseError("invalid character '" + shown + "'", line_, column_);
      }
    }
    return node;
  }

  static std::string hex(unsigned char u) {
    static const char* digits = "0123456789abcdef";
    return {digits[u >> 4], digits[u & 0xf]};
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

}  // namespace

SExpr read_sexpr(std::string_view text) { return Reader(text).read_top(true).front(); }

}  // namespace hrcplan::pddl::detail
