#include "hrcplan/pddl/parse.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>

#include "hrcplan/error.hpp"
#include "sexpr.hpp"

namespace hrcplan::pddl {

using detail::SExpr;

namespace {

const std::set<std::string> kKnownRequirements = {":strips",       ":typing",           ":negative-preconditions",
                                                  ":action-costs", ":durative-actions", ":numeric-fluents"};

[[noreturn]] void fail(const SExpr& at, const std::string& message) { throw ParseError(message, at.line, at.column); }

std::string describe(const SExpr& e) { return e.is_list ? std::string("(...)") : "'" + e.symbol + "'"; }

const SExpr& expect_list(const SExpr& e, const std::string& what) {
  if (!e.is_list) fail(e, "expected " + what + ", got " + describe(e));
  return e;
}

const std::string& expect_symbol(const SExpr& e, const std::string& what) {
  if (e.is_list) fail(e, "expected " + what + ", got (...)");
  return e.symbol;
}

std::string expect_name(const SExpr& e, const std::string& what) {
  const std::string& s = expect_symbol(e, what);
  if (s.empty() || s[0] == '?' || s[0] == ':' || s == "-") fail(e, "expected " + what + ", got '" + s + "'");
  return s;
}

std::optional<double> as_number(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last || first == last) return std::nullopt;
  return v;
}

/// `a b - t c` style list; names must satisfy `is_var` (variables) or be plain names.
std::vector<TypedName> parse_typed_list(const std::vector<SExpr>& items, std::size_t begin, bool variables,
                                        const std::string& what) {
  std::vector<TypedName> out;
  std::size_t pending_from = 0;
  for (std::size_t i = begin; i < items.size(); ++i) {
    const SExpr& e = items[i];
    if (e.is_symbol("-")) {
      if (i + 1 >= items.size()) fail(e, "missing type after '-'");
      if (out.size() == pending_from) fail(e, "'-' without preceding " + what);
      const std::string type = expect_name(items[i + 1], "type name");
      for (std::size_t k = pending_from; k < out.size(); ++k) out[k].type = type;
      pending_from = out.size();
      ++i;
      continue;
    }
    const std::string& s = expect_symbol(e, what);
    if (variables && (s.size() < 2 || s[0] != '?')) fail(e, "expected variable, got '" + s + "'");
    if (!variables) expect_name(e, what);
    out.push_back({s, "object"});
  }
  return out;
}

class DomainParser {
 public:
  DomainAst parse(const SExpr& root) {
    expect_list(root, "'(define'");
    if (root.items.empty() || !root.items[0].is_symbol("define")) fail(root, "expected 'define'");
    if (root.items.size() < 2) fail(root, "missing domain name");
    const SExpr& header = expect_list(root.items[1], "(domain NAME)");
    if (header.items.size() != 2 || !header.items[0].is_symbol("domain")) fail(header, "expected (domain NAME)");
    ast_.name = expect_name(header.items[1], "domain name");

    bool seen_types = false;
    for (std::size_t i = 2; i < root.items.size(); ++i) {
      const SExpr& sec = expect_list(root.items[i], "section");
      if (sec.items.empty() || !sec.items[0].is_symbol()) fail(sec, "expected section keyword");
      const std::string& key = sec.items[0].symbol;
      if (key == ":requirements") {
        parse_requirements(sec);
      } else if (key == ":types") {
        if (seen_types) fail(sec, "duplicate :types section");
        seen_types = true;
        parse_types(sec);
      } else if (key == ":predicates") {
        parse_predicates(sec);
      } else if (key == ":functions") {
        parse_functions(sec);
      } else if (key == ":action") {
        parse_action(sec, false);
      } else if (key == ":durative-action") {
        parse_action(sec, true);
      } else {
        fail(sec.items[0], "unknown section '" + key + "'");
      }
    }
    return std::move(ast_);
  }

 private:
  void parse_requirements(const SExpr& sec) {
    for (std::size_t i = 1; i < sec.items.size(); ++i) {
      const std::string& flag = expect_symbol(sec.items[i], "requirement flag");
      if (!kKnownRequirements.count(flag)) fail(sec.items[i], "unknown requirement flag '" + flag + "'");
      if (std::find(ast_.requirements.begin(), ast_.requirements.end(), flag) == ast_.requirements.end())
        ast_.requirements.push_back(flag);
    }
  }

  void parse_types(const SExpr& sec) {
    auto list = parse_typed_list(sec.items, 1, false, "type name");
    std::set<std::string> declared;
    for (const auto& t : list) {
      if (t.name == "object") fail(sec, "type 'object' is built in");
      if (!declared.insert(t.name).second) fail(sec, "duplicate type '" + t.name + "'");
    }
    const std::size_t explicit_count = list.size();
    for (std::size_t k = 0; k < explicit_count; ++k) {
      const std::string parent = list[k].type;
      if (parent != "object" && !declared.count(parent)) {
        declared.insert(parent);
        list.push_back({parent, "object"});
      }
    }
    // Reject cycles such as `a - b b - a`.
    for (const auto& t : list) {
      std::string cur = t.name;
      for (std::size_t steps = 0; cur != "object"; ++steps) {
        if (steps > list.size()) fail(sec, "cyclic type hierarchy at '" + t.name + "'");
        auto it = std::find_if(list.begin(), list.end(), [&](const TypedName& x) { return x.name == cur; });
        cur = it->type;
      }
    }
    ast_.types = std::move(list);
  }

  void check_type(const SExpr& at, const std::string& type) {
    if (!ast_.has_type(type)) fail(at, "undeclared type '" + type + "'");
  }

  void check_params(const SExpr& at, const std::vector<TypedName>& params) {
    std::set<std::string> seen;
    for (const auto& p : params) {
      check_type(at, p.type);
      if (!seen.insert(p.name).second) fail(at, "duplicate parameter '" + p.name + "'");
    }
  }

  void parse_predicates(const SExpr& sec) {
    for (std::size_t i = 1; i < sec.items.size(); ++i) {
      const SExpr& p = expect_list(sec.items[i], "predicate declaration");
      if (p.items.empty()) fail(p, "empty predicate declaration");
      PredicateDecl decl{expect_name(p.items[0], "predicate name"), parse_typed_list(p.items, 1, true, "variable")};
      check_params(p, decl.params);
      if (ast_.find_predicate(decl.name)) fail(p, "duplicate predicate '" + decl.name + "'");
      ast_.predicates.push_back(std::move(decl));
    }
  }

  void parse_functions(const SExpr& sec) {
    for (std::size_t i = 1; i < sec.items.size(); ++i) {
      const SExpr& f = sec.items[i];
      if (f.is_symbol("-")) {
        if (i + 1 >= sec.items.size() || !sec.items[i + 1].is_symbol("number"))
          fail(f, "only 'number' functions are supported");
        ++i;
        continue;
      }
      expect_list(f, "function declaration");
      if (f.items.empty()) fail(f, "empty function declaration");
      FunctionDecl decl{expect_name(f.items[0], "function name"), parse_typed_list(f.items, 1, true, "variable")};
      check_params(f, decl.params);
      for (const auto& d : ast_.functions)
        if (d.name == decl.name) fail(f, "duplicate function '" + decl.name + "'");
      ast_.functions.push_back(std::move(decl));
    }
  }

  const FunctionDecl* find_function(const std::string& name) const {
    for (const auto& f : ast_.functions)
      if (f.name == name) return &f;
    return nullptr;
  }

  Atom parse_atom(const SExpr& e, const std::vector<TypedName>& params) {
    expect_list(e, "atom");
    if (e.items.empty()) fail(e, "empty atom");
    Atom atom;
    atom.predicate = expect_name(e.items[0], "predicate name");
    const PredicateDecl* decl = ast_.find_predicate(atom.predicate);
    if (!decl) fail(e.items[0], "undeclared predicate '" + atom.predicate + "'");
    if (decl->params.size() != e.items.size() - 1)
      fail(e, "predicate '" + atom.predicate + "' expects " + std::to_string(decl->params.size()) + " arguments");
    for (std::size_t i = 1; i < e.items.size(); ++i) {
      const std::string& arg = expect_symbol(e.items[i], "argument");
      if (arg.empty() || arg[0] != '?') fail(e.items[i], "constants are not supported in action schemas");
      auto it = std::find_if(params.begin(), params.end(), [&](const TypedName& p) { return p.name == arg; });
      if (it == params.end()) fail(e.items[i], "unknown variable '" + arg + "'");
      if (!ast_.is_subtype(it->type, decl->params[i - 1].type))
        fail(e.items[i], "variable '" + arg + "' has type '" + it->type + "', predicate expects '" +
                             decl->params[i - 1].type + "'");
      atom.args.push_back(arg);
    }
    return atom;
  }

  NumExpr parse_num(const SExpr& e, const std::vector<TypedName>& params) {
    if (e.is_symbol()) {
      auto v = as_number(e.symbol);
      if (!v) fail(e, "expected number, got '" + e.symbol + "'");
      return *v;
    }
    if (e.items.empty()) fail(e, "empty numeric expression");
    FluentTerm term;
    term.name = expect_name(e.items[0], "function name");
    const FunctionDecl* decl = find_function(term.name);
    if (!decl) fail(e.items[0], "undeclared function '" + term.name + "'");
    if (decl->params.size() != e.items.size() - 1) fail(e, "function '" + term.name + "' has wrong arity");
    for (std::size_t i = 1; i < e.items.size(); ++i) {
      const std::string& arg = expect_symbol(e.items[i], "argument");
      auto it = std::find_if(params.begin(), params.end(), [&](const TypedName& p) { return p.name == arg; });
      if (it == params.end()) fail(e.items[i], "unknown variable '" + arg + "'");
      term.args.push_back(arg);
    }
    return term;
  }

  /// Strips `(at start X)`, `(over all X)`, `(at end X)` in durative actions.
  const SExpr& unwrap_timed(const SExpr& e, bool durative) {
    if (!durative || !e.is_list || e.items.empty() || !e.items[0].is_symbol()) return e;
    const std::string& head = e.items[0].symbol;
    if ((head == "at" || head == "over") && e.items.size() == 3) {
      const std::string& when = expect_symbol(e.items[1], "time specifier");
      if ((head == "at" && (when == "start" || when == "end")) || (head == "over" && when == "all")) return e.items[2];
      fail(e.items[1], "unknown time specifier '" + when + "'");
    }
    return e;
  }

  std::vector<const SExpr*> conjuncts(const SExpr& e) {
    expect_list(e, "condition");
    if (!e.items.empty() && e.items[0].is_symbol("and")) {
      std::vector<const SExpr*> out;
      for (std::size_t i = 1; i < e.items.size(); ++i) out.push_back(&e.items[i]);
      return out;
    }
    if (e.items.empty()) return {};
    return {&e};
  }

  void parse_precondition(const SExpr& e, ActionSchema& a, bool durative) {
    for (const SExpr* c : conjuncts(e)) {
      const SExpr& lit = unwrap_timed(*c, durative);
      expect_list(lit, "literal");
      if (!lit.items.empty() && lit.items[0].is_symbol("not")) {
        if (lit.items.size() != 2) fail(lit, "'not' takes one atom");
        a.precondition.push_back({parse_atom(lit.items[1], a.params), true});
      } else if (!lit.items.empty() && lit.items[0].is_symbol() &&
                 (lit.items[0].symbol == "or" || lit.items[0].symbol == "forall" || lit.items[0].symbol == "exists" ||
                  lit.items[0].symbol == "imply" || lit.items[0].symbol == "=")) {
        fail(lit.items[0], "unsupported condition '" + lit.items[0].symbol + "'");
      } else {
        a.precondition.push_back({parse_atom(lit, a.params), false});
      }
    }
  }

  void parse_effect(const SExpr& e, ActionSchema& a, bool durative) {
    for (const SExpr* c : conjuncts(e)) {
      const SExpr& eff = unwrap_timed(*c, durative);
      expect_list(eff, "effect");
      if (!eff.items.empty() && eff.items[0].is_symbol("not")) {
        if (eff.items.size() != 2) fail(eff, "'not' takes one atom");
        a.del.push_back(parse_atom(eff.items[1], a.params));
      } else if (!eff.items.empty() && eff.items[0].is_symbol("increase")) {
        if (eff.items.size() != 3) fail(eff, "'increase' takes two arguments");
        const SExpr& target = eff.items[1];
        if (!target.is_list || target.items.size() != 1 || !target.items[0].is_symbol("total-cost"))
          fail(target, "only (total-cost) can be increased");
        if (a.cost) fail(eff, "action increases total-cost twice");
        a.cost = parse_num(eff.items[2], a.params);
      } else if (!eff.items.empty() && eff.items[0].is_symbol() &&
                 (eff.items[0].symbol == "when" || eff.items[0].symbol == "forall" ||
                  eff.items[0].symbol == "decrease" || eff.items[0].symbol == "assign")) {
        fail(eff.items[0], "unsupported effect '" + eff.items[0].symbol + "'");
      } else {
        a.add.push_back(parse_atom(eff, a.params));
      }
    }
    for (const Atom& x : a.add)
      if (std::find(a.del.begin(), a.del.end(), x) != a.del.end())
        fail(e, "atom " + x.to_string() + " is both added and deleted");
  }

  void parse_action(const SExpr& sec, bool durative) {
    if (sec.items.size() < 2) fail(sec, "missing action name");
    ActionSchema a;
    a.name = expect_name(sec.items[1], "action name");
    if (ast_.find_action(a.name)) fail(sec.items[1], "duplicate action '" + a.name + "'");
    const SExpr* pre = nullptr;
    const SExpr* eff = nullptr;
    const SExpr* dur = nullptr;
    bool have_params = false;
    for (std::size_t i = 2; i < sec.items.size(); i += 2) {
      const std::string& key = expect_symbol(sec.items[i], "action keyword");
      if (i + 1 >= sec.items.size()) fail(sec.items[i], "missing value for '" + key + "'");
      const SExpr& value = sec.items[i + 1];
      if (key == ":parameters") {
        expect_list(value, "parameter list");
        a.params = parse_typed_list(value.items, 0, true, "variable");
        check_params(value, a.params);
        have_params = true;
      } else if (key == ":precondition" && !durative) {
        pre = &value;
      } else if (key == ":condition" && durative) {
        pre = &value;
      } else if (key == ":effect") {
        eff = &value;
      } else if (key == ":duration" && durative) {
        dur = &value;
      } else {
        fail(sec.items[i], "unexpected keyword '" + key + "'");
      }
    }
    if (!have_params) a.params.clear();
    if (pre) parse_precondition(*pre, a, durative);
    if (eff) parse_effect(*eff, a, durative);
    if (durative) {
      if (!dur) fail(sec, "durative action without :duration");
      expect_list(*dur, "(= ?duration EXPR)");
      if (dur->items.size() != 3 || !dur->items[0].is_symbol("=") || !dur->items[1].is_symbol("?duration"))
        fail(*dur, "expected (= ?duration EXPR)");
      a.duration = parse_num(dur->items[2], a.params);
    }
    ast_.actions.push_back(std::move(a));
  }

  DomainAst ast_;
};

class ProblemParser {
 public:
  explicit ProblemParser(const DomainAst* domain) : domain_(domain) {}

  ProblemAst parse(const SExpr& root) {
    expect_list(root, "'(define'");
    if (root.items.empty() || !root.items[0].is_symbol("define")) fail(root, "expected 'define'");
    if (root.items.size() < 2) fail(root, "missing problem name");
    const SExpr& header = expect_list(root.items[1], "(problem NAME)");
    if (header.items.size() != 2 || !header.items[0].is_symbol("problem")) fail(header, "expected (problem NAME)");
    ast_.name = expect_name(header.items[1], "problem name");

    const SExpr* init = nullptr;
    const SExpr* goal = nullptr;
    for (std::size_t i = 2; i < root.items.size(); ++i) {
      const SExpr& sec = expect_list(root.items[i], "section");
      if (sec.items.empty() || !sec.items[0].is_symbol()) fail(sec, "expected section keyword");
      const std::string& key = sec.items[0].symbol;
      if (key == ":domain") {
        if (sec.items.size() != 2) fail(sec, "expected (:domain NAME)");
        ast_.domain_name = expect_name(sec.items[1], "domain name");
        if (domain_ && domain_->name != ast_.domain_name)
          fail(sec.items[1], "problem is for domain '" + ast_.domain_name + "', not '" + domain_->name + "'");
      } else if (key == ":requirements") {
        for (std::size_t k = 1; k < sec.items.size(); ++k) {
          const std::string& flag = expect_symbol(sec.items[k], "requirement flag");
          if (!kKnownRequirements.count(flag)) fail(sec.items[k], "unknown requirement flag '" + flag + "'");
        }
      } else if (key == ":objects") {
        parse_objects(sec);
      } else if (key == ":init") {
        init = &sec;
      } else if (key == ":goal") {
        goal = &sec;
      } else if (key == ":metric") {
        if (sec.items.size() != 3 || !sec.items[1].is_symbol("minimize") || !sec.items[2].is_list ||
            sec.items[2].items.size() != 1 || !sec.items[2].items[0].is_symbol("total-cost"))
          fail(sec, "only (:metric minimize (total-cost)) is supported");
        ast_.minimize_total_cost = true;
      } else {
        fail(sec.items[0], "unknown section '" + key + "'");
      }
    }
    if (ast_.domain_name.empty()) fail(root, "missing (:domain NAME)");
    if (init) parse_init(*init);
    if (!goal) fail(root, "missing :goal");
    parse_goal(*goal);
    return std::move(ast_);
  }

 private:
  void parse_objects(const SExpr& sec) {
    auto objs = parse_typed_list(sec.items, 1, false, "object name");
    for (const auto& o : objs) {
      if (domain_ && !domain_->has_type(o.type))
        fail(sec, "object '" + o.name + "' has undeclared type '" + o.type + "'");
      if (types_.count(o.name)) fail(sec, "duplicate object '" + o.name + "'");
      types_[o.name] = o.type;
      ast_.objects.push_back(o);
    }
  }

  Atom parse_ground_atom(const SExpr& e) {
    expect_list(e, "atom");
    if (e.items.empty()) fail(e, "empty atom");
    Atom atom;
    atom.predicate = expect_name(e.items[0], "predicate name");
    const PredicateDecl* decl = domain_ ? domain_->find_predicate(atom.predicate) : nullptr;
    if (domain_ && !decl) fail(e.items[0], "undeclared predicate '" + atom.predicate + "'");
    if (decl && decl->params.size() != e.items.size() - 1)
      fail(e, "predicate '" + atom.predicate + "' expects " + std::to_string(decl->params.size()) + " arguments");
    for (std::size_t i = 1; i < e.items.size(); ++i) {
      const std::string arg = expect_name(e.items[i], "object");
      auto it = types_.find(arg);
      if (it == types_.end()) fail(e.items[i], "undeclared object '" + arg + "'");
      if (decl && !domain_->is_subtype(it->second, decl->params[i - 1].type))
        fail(e.items[i], "object '" + arg + "' has type '" + it->second + "', predicate expects '" +
                             decl->params[i - 1].type + "'");
      atom.args.push_back(arg);
    }
    return atom;
  }

  void parse_init(const SExpr& sec) {
    for (std::size_t i = 1; i < sec.items.size(); ++i) {
      const SExpr& e = expect_list(sec.items[i], "init fact");
      if (!e.items.empty() && e.items[0].is_symbol("=")) {
        if (e.items.size() != 3) fail(e, "expected (= (FLUENT ARGS) NUMBER)");
        const SExpr& term = expect_list(e.items[1], "fluent");
        if (term.items.empty()) fail(term, "empty fluent");
        NumericInit ni;
        ni.term.name = expect_name(term.items[0], "function name");
        if (domain_) {
          auto it = std::find_if(domain_->functions.begin(), domain_->functions.end(),
                                 [&](const FunctionDecl& f) { return f.name == ni.term.name; });
          if (it == domain_->functions.end()) fail(term.items[0], "undeclared function '" + ni.term.name + "'");
          if (it->params.size() != term.items.size() - 1) fail(term, "function '" + ni.term.name + "' has wrong arity");
        }
        for (std::size_t k = 1; k < term.items.size(); ++k) {
          const std::string arg = expect_name(term.items[k], "object");
          if (!types_.count(arg)) fail(term.items[k], "undeclared object '" + arg + "'");
          ni.term.args.push_back(arg);
        }
        const std::string& num = expect_symbol(e.items[2], "number");
        auto v = as_number(num);
        if (!v) fail(e.items[2], "expected number, got '" + num + "'");
        ni.value = *v;
        ast_.numeric_init.push_back(std::move(ni));
      } else {
        ast_.init.push_back(parse_ground_atom(e));
      }
    }
  }

  void parse_goal(const SExpr& sec) {
    if (sec.items.size() != 2) fail(sec, "expected (:goal CONDITION)");
    const SExpr& g = expect_list(sec.items[1], "goal condition");
    std::vector<const SExpr*> parts;
    if (!g.items.empty() && g.items[0].is_symbol("and")) {
      for (std::size_t i = 1; i < g.items.size(); ++i) parts.push_back(&g.items[i]);
    } else if (!g.items.empty()) {
      parts.push_back(&g);
    }
    if (parts.empty()) fail(g, "empty goal");
    for (const SExpr* p : parts) {
      if (p->is_list && !p->items.empty() && p->items[0].is_symbol() &&
          (p->items[0].symbol == "not" || p->items[0].symbol == "or" || p->items[0].symbol == "forall" ||
           p->items[0].symbol == "exists"))
        fail(p->items[0], "unsupported goal '" + p->items[0].symbol + "'");
      ast_.goal.push_back(parse_ground_atom(*p));
    }
  }

  const DomainAst* domain_;
  std::map<std::string, std::string> types_;
  ProblemAst ast_;
};

}  // namespace

DomainAst parse_domain(std::string_view text) { return DomainParser().parse(detail::read_sexpr(text)); }

ProblemAst parse_problem(std::string_view text, const DomainAst* domain) {
  return ProblemParser(domain).parse(detail::read_sexpr(text));
}

}  // namespace hrcplan::pddl
