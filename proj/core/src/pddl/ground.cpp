#include <algorithm>
#include <map>
#include <set>

#include "hrcplan/error.hpp"
#include "hrcplan/pddl/task.hpp"

namespace hrcplan::pddl {

std::string GroundedOp::name() const {
  std::string s = schema;
  for (const auto& a : args) s += " " + a;
  return s;
}

std::optional<PropId> GroundedTask::find_proposition(const Atom& atom) const {
  auto it = std::lower_bound(propositions.begin(), propositions.end(), atom);
  if (it != propositions.end() && *it == atom) return static_cast<PropId>(it - propositions.begin());
  // Not necessarily sorted if built by hand.
  for (PropId i = 0; i < propositions.size(); ++i)
    if (propositions[i] == atom) return i;
  return std::nullopt;
}

const GroundedOp* GroundedTask::find_op(const std::string& op_name) const {
  auto idx = find_op_index(op_name);
  return idx ? &ops[*idx] : nullptr;
}

std::optional<std::size_t> GroundedTask::find_op_index(const std::string& op_name) const {
  for (std::size_t i = 0; i < ops.size(); ++i)
    if (ops[i].name() == op_name) return i;
  return std::nullopt;
}

void GroundedTask::validate() const {
  auto check = [&](const std::vector<PropId>& ids, const std::string& what) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (ids[i] >= propositions.size()) throw Error(what + ": proposition index out of range");
      if (i > 0 && ids[i - 1] >= ids[i]) throw Error(what + ": index set not sorted and duplicate-free");
    }
  };
  check(init, "init");
  check(goal, "goal");
  for (const auto& op : ops) {
    const std::string what = "op (" + op.name() + ")";
    check(op.pre, what + " pre");
    check(op.pre_neg, what + " pre_neg");
    check(op.add, what + " add");
    check(op.del, what + " del");
    if (op.cost.is_infinite()) throw Error(what + " has infinite cost");
    if (!(op.duration_s > 0.0)) throw Error(what + " has non-positive duration");
  }
}

std::vector<std::string> static_predicates(const DomainAst& domain) {
  std::set<std::string> dynamic;
  for (const auto& a : domain.actions) {
    for (const auto& x : a.add) dynamic.insert(x.predicate);
    for (const auto& x : a.del) dynamic.insert(x.predicate);
  }
  std::vector<std::string> out;
  for (const auto& p : domain.predicates)
    if (!dynamic.count(p.name)) out.push_back(p.name);
  return out;
}

namespace {

using Binding = std::map<std::string, std::string>;

Atom substitute(const Atom& a, const Binding& b) {
  Atom out{a.predicate, {}};
  out.args.reserve(a.args.size());
  for (const auto& v : a.args) out.args.push_back(b.at(v));
  return out;
}

std::vector<std::string> substitute_args(const std::vector<std::string>& args, const Binding& b) {
  std::vector<std::string> out;
  for (const auto& v : args) {
    auto it = b.find(v);
    out.push_back(it == b.end() ? v : it->second);
  }
  return out;
}

struct Candidate {
  std::string schema;
  std::vector<std::string> args;
  std::vector<Atom> pre, pre_neg, add, del;
  ExtCost cost;
  double duration_s = 1.0;
  std::vector<std::string> agents;
};

class Grounder {
 public:
  Grounder(const DomainAst& d, const ProblemAst& p, const CostProvider& costs, const GroundOptions& opt)
      : domain_(d), problem_(p), costs_(costs), options_(opt) {
    for (const auto& s : static_predicates(d)) statics_.insert(s);
    for (const auto& a : p.init) init_.insert(a);
    for (const auto& n : p.numeric_init) numeric_[{n.term.name, n.term.args}] = n.value;
  }

  GroundedTask run() {
    for (const auto& schema : domain_.actions) ground_schema(schema);
    return assemble();
  }

 private:
  bool is_static(const Atom& a) const { return statics_.count(a.predicate) > 0; }

  std::vector<std::string> objects_of(const std::string& type) const {
    std::vector<std::string> out;
    for (const auto& o : problem_.objects)
      if (domain_.is_subtype(o.type, type)) out.push_back(o.name);
    return out;
  }

  bool static_ok(const Literal& l, const Binding& b) const {
    const bool holds = init_.count(substitute(l.atom, b)) > 0;
    return l.negated ? !holds : holds;
  }

  void ground_schema(const ActionSchema& schema) {
    std::vector<std::vector<std::string>> domains;
    for (const auto& p : schema.params) domains.push_back(objects_of(p.type));
    // Static literal i becomes checkable once parameter ready_at[i] is bound.
    std::vector<std::vector<const Literal*>> checks(schema.params.size() + 1);
    for (const auto& l : schema.precondition) {
      if (!is_static(l.atom)) continue;
      std::size_t last = 0;
      for (const auto& v : l.atom.args) {
        for (std::size_t k = 0; k < schema.params.size(); ++k)
          if (schema.params[k].name == v) last = std::max(last, k + 1);
      }
      checks[last].push_back(&l);
    }
    Binding binding;
    for (const Literal* l : checks[0])
      if (!static_ok(*l, binding)) return;
    bind(schema, domains, checks, 0, binding);
  }

  void bind(const ActionSchema& schema, const std::vector<std::vector<std::string>>& domains,
            const std::vector<std::vector<const Literal*>>& checks, std::size_t depth, Binding& binding) {
    if (depth == schema.params.size()) {
      instantiate(schema, binding);
      return;
    }
    for (const auto& obj : domains[depth]) {
      binding[schema.params[depth].name] = obj;
      bool ok = true;
      for (const Literal* l : checks[depth + 1]) {
        if (!static_ok(*l, binding)) {
          ok = false;
          break;
        }
      }
      if (ok) bind(schema, domains, checks, depth + 1, binding);
    }
    binding.erase(schema.params[depth].name);
  }

  double evaluate_duration(const ActionSchema& schema, const Binding& binding, const std::string& name) const {
    if (!schema.duration) return options_.default_duration_s;
    double v = 0.0;
    if (const double* d = std::get_if<double>(&*schema.duration)) {
      v = *d;
    } else {
      const auto& t = std::get<FluentTerm>(*schema.duration);
      auto it = numeric_.find({t.name, substitute_args(t.args, binding)});
      if (it == numeric_.end()) throw Error("no duration value for (" + name + ")");
      v = it->second;
    }
    if (!(v > 0.0)) throw Error("non-positive duration for (" + name + ")");
    return v;
  }

  void instantiate(const ActionSchema& schema, const Binding& binding) {
    Candidate c;
    c.schema = schema.name;
    for (const auto& p : schema.params) {
      c.args.push_back(binding.at(p.name));
      if (domain_.has_type("agent") && domain_.is_subtype(p.type, "agent")) c.agents.push_back(binding.at(p.name));
    }
    std::string name = c.schema;
    for (const auto& a : c.args) name += " " + a;

    if (schema.cost) {
      auto cost = costs_(schema, c.args);
      if (!cost) throw Error("cost table has no entry for (" + name + ")");
      if (cost->is_infinite()) return;
      c.cost = *cost;
    }
    c.duration_s = evaluate_duration(schema, binding, name);
    for (const auto& l : schema.precondition) {
      if (is_static(l.atom)) continue;
      (l.negated ? c.pre_neg : c.pre).push_back(substitute(l.atom, binding));
    }
    for (const auto& a : schema.add) c.add.push_back(substitute(a, binding));
    for (const auto& d : schema.del) {
      Atom g = substitute(d, binding);
      // Add wins when an instantiation both adds and deletes an atom.
      if (std::find(c.add.begin(), c.add.end(), g) == c.add.end()) c.del.push_back(std::move(g));
    }
    candidates_.push_back(std::move(c));
  }

  GroundedTask assemble() {
    std::set<Atom> fluent_init;
    for (const auto& a : problem_.init)
      if (!is_static(a)) fluent_init.insert(a);

    std::vector<bool> keep(candidates_.size(), true);
    std::set<Atom> universe;
    if (options_.prune_unreachable) {
      std::set<Atom> reached = fluent_init;
      std::fill(keep.begin(), keep.end(), false);
      bool changed = true;
      while (changed) {
        changed = false;
        for (std::size_t i = 0; i < candidates_.size(); ++i) {
          if (keep[i]) continue;
          const auto& c = candidates_[i];
          if (!std::all_of(c.pre.begin(), c.pre.end(), [&](const Atom& a) { return reached.count(a) > 0; })) continue;
          keep[i] = true;
          changed = true;
          for (const auto& a : c.add) reached.insert(a);
        }
      }
      universe = std::move(reached);
    } else {
      universe = fluent_init;
      for (const auto& c : candidates_) {
        for (const auto* list : {&c.pre, &c.pre_neg, &c.add, &c.del}) universe.insert(list->begin(), list->end());
      }
    }

    bool unsolvable_static_goal = false;
    std::vector<Atom> goal_atoms;
    for (const auto& g : problem_.goal) {
      if (is_static(g)) {
        if (!init_.count(g)) unsolvable_static_goal = true;
        continue;
      }
      goal_atoms.push_back(g);
      universe.insert(g);
    }

    GroundedTask task;
    task.propositions.assign(universe.begin(), universe.end());
    // A static goal that is false can never hold; keep a proposition nobody adds.
    if (unsolvable_static_goal) {
      for (const auto& g : problem_.goal)
        if (is_static(g) && !init_.count(g)) {
          task.propositions.push_back(g);
          goal_atoms.push_back(g);
        }
      std::sort(task.propositions.begin(), task.propositions.end());
      task.propositions.erase(std::unique(task.propositions.begin(), task.propositions.end()), task.propositions.end());
    }
    auto id_of = [&](const Atom& a) -> std::optional<PropId> {
      auto it = std::lower_bound(task.propositions.begin(), task.propositions.end(), a);
      if (it == task.propositions.end() || !(*it == a)) return std::nullopt;
      return static_cast<PropId>(it - task.propositions.begin());
    };
    auto ids = [&](const std::vector<Atom>& atoms) {
      std::vector<PropId> out;
      for (const auto& a : atoms)
        if (auto id = id_of(a)) out.push_back(*id);
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      return out;
    };

    for (std::size_t i = 0; i < candidates_.size(); ++i) {
      if (!keep[i]) continue;
      auto& c = candidates_[i];
      GroundedOp op;
      op.schema = c.schema;
      op.args = c.args;
      op.pre = ids(c.pre);
      // Atoms outside the universe are never true, so negative conditions on them hold.
      op.pre_neg = ids(c.pre_neg);
      op.add = ids(c.add);
      op.del = ids(c.del);
      op.cost = c.cost;
      op.duration_s = c.duration_s;
      op.agents = c.agents;
      task.ops.push_back(std::move(op));
    }
    task.init = ids(std::vector<Atom>(fluent_init.begin(), fluent_init.end()));
    task.goal = ids(goal_atoms);
    return task;
  }

  const DomainAst& domain_;
  const ProblemAst& problem_;
  const CostProvider& costs_;
  GroundOptions options_;
  std::set<std::string> statics_;
  std::set<Atom> init_;
  std::map<std::pair<std::string, std::vector<std::string>>, double> numeric_;
  std::vector<Candidate> candidates_;
};

}  // namespace

CostProvider fluent_cost_provider(const ProblemAst& problem) {
  std::map<std::pair<std::string, std::vector<std::string>>, double> values;
  for (const auto& n : problem.numeric_init) values[{n.term.name, n.term.args}] = n.value;
  return [values = std::move(values)](const ActionSchema& schema,
                                      std::span<const std::string> args) -> std::optional<ExtCost> {
    if (!schema.cost) return ExtCost::zero();
    if (const double* d = std::get_if<double>(&*schema.cost)) return ExtCost(*d);
    const auto& t = std::get<FluentTerm>(*schema.cost);
    Binding b;
    for (std::size_t i = 0; i < schema.params.size() && i < args.size(); ++i) b[schema.params[i].name] = args[i];
    auto it = values.find({t.name, substitute_args(t.args, b)});
    if (it == values.end()) return ExtCost::infinity();
    return ExtCost(it->second);
  };
}

GroundedTask ground(const DomainAst& domain, const ProblemAst& problem, const CostProvider& costs,
                    const GroundOptions& options) {
  return Grounder(domain, problem, costs, options).run();
}

}  // namespace hrcplan::pddl
