#include <charconv>
#include <sstream>

#include "hrcplan/pddl/parse.hpp"

namespace hrcplan::pddl {

namespace {

std::string number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string typed(const std::vector<TypedName>& names) {
  std::string s;
  for (const auto& n : names) {
    if (!s.empty()) s += ' ';
    s += n.name + " - " + n.type;
  }
  return s;
}

std::string num_expr(const NumExpr& e) {
  if (const double* d = std::get_if<double>(&e)) return number(*d);
  const auto& t = std::get<FluentTerm>(e);
  std::string s = "(" + t.name;
  for (const auto& a : t.args) s += " " + a;
  return s + ")";
}

}  // namespace

std::string emit_domain(const DomainAst& d) {
  std::ostringstream os;
  os << "(define (domain " << d.name << ")\n";
  if (!d.requirements.empty()) {
    os << "  (:requirements";
    for (const auto& r : d.requirements) os << ' ' << r;
    os << ")\n";
  }
  if (!d.types.empty()) {
    os << "  (:types\n";
    for (const auto& t : d.types) os << "    " << t.name << " - " << t.type << "\n";
    os << "  )\n";
  }
  os << "  (:predicates\n";
  for (const auto& p : d.predicates) {
    os << "    (" << p.name;
    if (!p.params.empty()) os << ' ' << typed(p.params);
    os << ")\n";
  }
  os << "  )\n";
  if (!d.functions.empty()) {
    os << "  (:functions\n";
    for (const auto& f : d.functions) {
      os << "    (" << f.name;
      if (!f.params.empty()) os << ' ' << typed(f.params);
      os << ") - number\n";
    }
    os << "  )\n";
  }
  for (const auto& a : d.actions) {
    const bool durative = a.duration.has_value();
    const char* cond_wrap = durative ? "(at start " : "";
    const char* eff_wrap = durative ? "(at end " : "";
    const char* close = durative ? ")" : "";
    os << "\n  (" << (durative ? ":durative-action " : ":action ") << a.name << "\n";
    os << "    :parameters (" << typed(a.params) << ")\n";
    if (durative) os << "    :duration (= ?duration " << num_expr(*a.duration) << ")\n";
    os << (durative ? "    :condition (and" : "    :precondition (and");
    for (const auto& l : a.precondition) {
      os << "\n      " << cond_wrap;
      if (l.negated)
        os << "(not " << l.atom.to_string() << ")";
      else
        os << l.atom.to_string();
      os << close;
    }
    os << ")\n";
    os << "    :effect (and";
    for (const auto& x : a.add) os << "\n      " << eff_wrap << x.to_string() << close;
    for (const auto& x : a.del) os << "\n      " << eff_wrap << "(not " << x.to_string() << ")" << close;
    if (a.cost) os << "\n      " << eff_wrap << "(increase (total-cost) " << num_expr(*a.cost) << ")" << close;
    os << ")\n  )\n";
  }
  os << ")\n";
  return os.str();
}

std::string emit_problem(const ProblemAst& p) {
  std::ostringstream os;
  os << "(define (problem " << p.name << ")\n";
  os << "  (:domain " << p.domain_name << ")\n";
  os << "  (:objects";
  for (const auto& o : p.objects) os << "\n    " << o.name << " - " << o.type;
  os << ")\n";
  os << "  (:init";
  for (const auto& a : p.init) os << "\n    " << a.to_string();
  for (const auto& n : p.numeric_init) os << "\n    (= " << num_expr(n.term) << ' ' << number(n.value) << ")";
  os << ")\n";
  os << "  (:goal (and";
  for (const auto& g : p.goal) os << "\n    " << g.to_string();
  os << "))\n";
  if (p.minimize_total_cost) os << "  (:metric minimize (total-cost))\n";
  os << ")\n";
  return os.str();
}

}  // namespace hrcplan::pddl
