#pragma once

// Random inputs shared by the unit and acceptance suites.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "hrcplan/pddl/ast.hpp"
#include "hrcplan/pddl/task.hpp"

namespace hrcplan::testgen {

using Rng = std::mt19937_64;

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

inline std::vector<pddl::PropId> random_subset(Rng& rng, std::size_t universe, std::size_t lo, std::size_t hi) {
  std::vector<pddl::PropId> all(universe);
  for (std::size_t i = 0; i < universe; ++i) all[i] = i;
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(std::min(universe, uniform(rng, lo, hi)));
  std::sort(all.begin(), all.end());
  return all;
}

inline std::vector<pddl::PropId> minus(const std::vector<pddl::PropId>& a, const std::vector<pddl::PropId>& b) {
  std::vector<pddl::PropId> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

struct TaskShape {
  std::size_t max_props = 12;
  std::size_t max_ops = 20;
  double negative_pre = 0.2;
  double zero_cost = 0.1;
};

/// A small propositional task with costs on a 1e-3 grid, a few agents and durations.
inline pddl::GroundedTask random_task(Rng& rng, const TaskShape& shape = {}) {
  pddl::GroundedTask t;
  const std::size_t n = uniform(rng, 2, shape.max_props);
  for (std::size_t i = 0; i < n; ++i) t.propositions.push_back({"p" + std::to_string(i), {}});
  const std::size_t m = uniform(rng, 1, shape.max_ops);
  static const char* agents[] = {"r1", "r2", "w"};
  for (std::size_t i = 0; i < m; ++i) {
    pddl::GroundedOp op;
    op.schema = "a";
    op.args = {std::to_string(100 + i)};
    op.pre = random_subset(rng, n, 0, 3);
    if (coin(rng, shape.negative_pre)) op.pre_neg = minus(random_subset(rng, n, 1, 1), op.pre);
    op.add = random_subset(rng, n, 1, 3);
    op.del = minus(random_subset(rng, n, 0, 2), op.add);
    const double cost = coin(rng, shape.zero_cost) ? 0.0 : static_cast<double>(uniform(rng, 1, 9000)) / 1000.0;
    op.cost = ExtCost(cost);
    op.duration_s = static_cast<double>(uniform(rng, 1, 10));
    for (const char* a : agents)
      if (coin(rng, 0.3)) op.agents.push_back(a);
    t.ops.push_back(std::move(op));
  }
  t.init = random_subset(rng, n, 0, n / 2);
  t.goal = random_subset(rng, n, 1, 3);
  return t;
}

namespace detail {

inline std::string pick_type(Rng& rng, const std::vector<std::string>& types) {
  return types[uniform(rng, 0, types.size() - 1)];
}

/// Variables among `params` usable for each slot of `decl`, or empty if some slot has none.
inline std::vector<std::string> bind(Rng& rng, const pddl::DomainAst& d, const pddl::PredicateDecl& decl,
                                     const std::vector<pddl::TypedName>& params) {
  std::vector<std::string> args;
  for (const auto& slot : decl.params) {
    std::vector<std::string> fits;
    for (const auto& p : params)
      if (d.is_subtype(p.type, slot.type)) fits.push_back(p.name);
    if (fits.empty()) return {};
    args.push_back(fits[uniform(rng, 0, fits.size() - 1)]);
  }
  return args;
}

inline double random_number(Rng& rng) {
  switch (uniform(rng, 0, 3)) {
    case 0:
      return static_cast<double>(uniform(rng, 0, 20));
    case 1:
      return std::uniform_real_distribution<double>(0.0, 100.0)(rng);
    case 2:
      return static_cast<double>(uniform(rng, 1, 999)) / 8.0;
    default:
      return std::ldexp(std::uniform_real_distribution<double>(1.0, 2.0)(rng),
                        static_cast<int>(uniform(rng, 0, 40)) - 20);
  }
}

}  // namespace detail

inline pddl::DomainAst random_domain(Rng& rng) {
  pddl::DomainAst d;
  d.name = "dom-" + std::to_string(uniform(rng, 0, 999));
  for (const char* r : {":strips", ":typing", ":negative-preconditions", ":action-costs", ":durative-actions"})
    if (coin(rng)) d.requirements.push_back(r);

  std::vector<std::string> types = {"object"};
  const std::size_t n_types = uniform(rng, 0, 4);
  for (std::size_t i = 0; i < n_types; ++i) {
    const std::string name = "t" + std::to_string(i);
    d.types.push_back({name, detail::pick_type(rng, types)});
    types.push_back(name);
  }

  const std::size_t n_preds = uniform(rng, 1, 5);
  for (std::size_t i = 0; i < n_preds; ++i) {
    pddl::PredicateDecl p{"pred" + std::to_string(i), {}};
    const std::size_t arity = i == 0 ? 0 : uniform(rng, 0, 3);
    for (std::size_t k = 0; k < arity; ++k)
      p.params.push_back({"?x" + std::to_string(k), detail::pick_type(rng, types)});
    d.predicates.push_back(std::move(p));
  }

  const std::size_t n_actions = uniform(rng, 0, 4);
  for (std::size_t i = 0; i < n_actions; ++i) {
    pddl::ActionSchema a;
    a.name = "act-" + std::to_string(i);
    const std::size_t n_params = uniform(rng, 0, 3);
    for (std::size_t k = 0; k < n_params; ++k)
      a.params.push_back({"?v" + std::to_string(k), detail::pick_type(rng, types)});

    std::set<pddl::Atom> used;
    auto random_atom = [&]() -> std::optional<pddl::Atom> {
      const auto& decl = d.predicates[uniform(rng, 0, d.predicates.size() - 1)];
      auto args = detail::bind(rng, d, decl, a.params);
      if (args.size() != decl.params.size()) return std::nullopt;
      pddl::Atom atom{decl.name, args};
      if (!used.insert(atom).second) return std::nullopt;
      return atom;
    };
    for (std::size_t k = uniform(rng, 0, 3); k > 0; --k)
      if (auto atom = random_atom()) a.precondition.push_back({*atom, coin(rng, 0.25)});
    used.clear();
    for (std::size_t k = uniform(rng, 0, 2); k > 0; --k)
      if (auto atom = random_atom()) a.add.push_back(*atom);
    for (std::size_t k = uniform(rng, 0, 2); k > 0; --k)
      if (auto atom = random_atom()) a.del.push_back(*atom);

    if (coin(rng, 0.7)) {
      if (coin(rng)) {
        a.cost = detail::random_number(rng);
      } else {
        pddl::FunctionDecl f{a.name + "-cost", a.params};
        d.functions.push_back(f);
        std::vector<std::string> args;
        for (const auto& p : a.params) args.push_back(p.name);
        a.cost = pddl::FluentTerm{f.name, args};
      }
    }
    if (coin(rng)) a.duration = static_cast<double>(uniform(rng, 1, 40)) / 4.0;
    d.actions.push_back(std::move(a));
  }
  return d;
}

/// A problem over `d`'s types and predicates with a non-empty goal.
inline pddl::ProblemAst random_problem(Rng& rng, const pddl::DomainAst& d) {
  pddl::ProblemAst p;
  p.name = "prob-" + std::to_string(uniform(rng, 0, 999));
  p.domain_name = d.name;
  std::vector<std::string> types = {"object"};
  for (const auto& t : d.types) types.push_back(t.name);
  const std::size_t n_objects = uniform(rng, 0, 6);
  for (std::size_t i = 0; i < n_objects; ++i)
    p.objects.push_back({"o" + std::to_string(i), detail::pick_type(rng, types)});

  std::set<pddl::Atom> used;
  auto random_atom = [&]() -> std::optional<pddl::Atom> {
    const auto& decl = d.predicates[uniform(rng, 0, d.predicates.size() - 1)];
    auto args = detail::bind(rng, d, decl, p.objects);
    if (args.size() != decl.params.size()) return std::nullopt;
    pddl::Atom atom{decl.name, args};
    if (!used.insert(atom).second) return std::nullopt;
    return atom;
  };
  for (std::size_t k = uniform(rng, 0, 6); k > 0; --k)
    if (auto atom = random_atom()) p.init.push_back(*atom);
  for (const auto& f : d.functions) {
    if (!coin(rng, 0.6)) continue;
    pddl::NumericInit ni{{f.name, {}}, detail::random_number(rng)};
    bool ok = true;
    for (const auto& slot : f.params) {
      std::vector<std::string> fits;
      for (const auto& o : p.objects)
        if (d.is_subtype(o.type, slot.type)) fits.push_back(o.name);
      if (fits.empty()) {
        ok = false;
        break;
      }
      ni.term.args.push_back(fits[uniform(rng, 0, fits.size() - 1)]);
    }
    if (ok) p.numeric_init.push_back(std::move(ni));
  }
  used.clear();
  for (std::size_t k = uniform(rng, 0, 3); k > 0; --k)
    if (auto atom = random_atom()) p.goal.push_back(*atom);
  if (p.goal.empty()) p.goal.push_back({d.predicates.front().name, {}});
  p.minimize_total_cost = coin(rng);
  return p;
}

/// One to four byte-level edits: flips, insertions, deletions, duplications, truncation.
inline std::string mutate(Rng& rng, std::string s) {
  static const std::string alphabet = "()?-:; \n\tabcxyz019.=\"\x01\xff";
  const std::size_t edits = uniform(rng, 1, 4);
  for (std::size_t e = 0; e < edits; ++e) {
    const std::size_t pos = s.empty() ? 0 : uniform(rng, 0, s.size() - 1);
    switch (uniform(rng, 0, 5)) {
      case 0:
        if (!s.empty()) s[pos] = alphabet[uniform(rng, 0, alphabet.size() - 1)];
        break;
      case 1:
        s.insert(s.begin() + static_cast<std::ptrdiff_t>(std::min(pos, s.size())),
                 alphabet[uniform(rng, 0, alphabet.size() - 1)]);
        break;
      case 2:
        if (!s.empty()) s.erase(pos, uniform(rng, 1, 8));
        break;
      case 3:
        if (!s.empty()) s.insert(pos, s.substr(pos, uniform(rng, 1, 16)));
        break;
      case 4:
        s.resize(pos);
        break;
      default:
        if (!s.empty()) s[pos] = static_cast<char>(uniform(rng, 0, 255));
        break;
    }
  }
  return s;
}

}  // namespace hrcplan::testgen
