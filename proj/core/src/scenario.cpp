#include "hrcplan/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "hrcplan/error.hpp"

namespace hrcplan {

double Durations::of(ActionKind kind) const {
  switch (kind) {
    case ActionKind::Pick:
      return pick;
    case ActionKind::Place:
      return place;
    case ActionKind::Move:
      return move;
    case ActionKind::Cooperate:
      return cooperate;
  }
  return pick;
}

namespace {

template <class T>
const T* find_by_id(const std::vector<T>& items, std::string_view id) {
  for (const auto& x : items)
    if (x.id == id) return &x;
  return nullptr;
}

std::string indexed(const std::string& section, std::size_t i) { return section + "[" + std::to_string(i) + "]"; }

bool valid_identifier(const std::string& s) {
  if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) || c == '_' ||
           c == '-';
  });
}

constexpr double kCoincide = 1e-6;

}  // namespace

const AgentSpec* ScenarioConfig::find_agent(std::string_view id) const { return find_by_id(agents, id); }
const PartSpec* ScenarioConfig::find_part(std::string_view id) const { return find_by_id(parts, id); }
const LocationSpec* ScenarioConfig::find_location(std::string_view id) const { return find_by_id(locations, id); }
const PathSpec* ScenarioConfig::find_path(std::string_view id) const { return find_by_id(paths, id); }

const ReachModel* ScenarioConfig::find_reach_model(std::string_view robot) const {
  for (const auto& m : reach_models)
    if (m.robot == robot) return &m;
  return nullptr;
}

const PathSpec* ScenarioConfig::path_between(std::string_view a, std::string_view b) const {
  for (const auto& p : paths)
    if ((p.from == a && p.to == b) || (p.from == b && p.to == a)) return &p;
  return nullptr;
}

std::string info_object_name(std::string_view tag) {
  std::string out;
  for (char c : tag) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u))
      out += static_cast<char>(std::tolower(u));
    else if (c == '-' || c == '_')
      out += c;
    else if (!out.empty() && out.back() != '_')
      out += '_';
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  if (out.empty() || !std::isalpha(static_cast<unsigned char>(out[0]))) out = "info_" + out;
  return out;
}

void ScenarioConfig::validate() const {
  std::set<std::string> ids;
  auto claim = [&](const std::string& id, const std::string& path) {
    if (!valid_identifier(id)) throw ScenarioError(path + ".id", "invalid identifier '" + id + "'");
    if (!ids.insert(id).second) throw ScenarioError(path + ".id", "duplicate id '" + id + "'");
  };
  auto need_location = [&](const std::string& id, const std::string& path) {
    if (!find_location(id)) throw ScenarioError(path, "unknown location '" + id + "'");
  };

  if (agents.empty()) throw ScenarioError("agents", "at least one agent is required");
  for (std::size_t i = 0; i < locations.size(); ++i) {
    const auto& loc = locations[i];
    const std::string path = indexed("locations", i);
    claim(loc.id, path);
    if (!is_finite(loc.position)) throw ScenarioError(path + ".position", "must be finite");
  }
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const auto& a = agents[i];
    const std::string path = indexed("agents", i);
    claim(a.id, path);
    if (!(a.strength_limit_kg > 0.0) || !std::isfinite(a.strength_limit_kg))
      throw ScenarioError(path + ".strength", "must be positive");
    if (!is_finite(a.base)) throw ScenarioError(path + ".base", "must be finite");
    for (std::size_t b = 0; b < a.range.boxes.size(); ++b) {
      try {
        hrcplan::validate(a.range.boxes[b]);
      } catch (const Error& e) {
        throw ScenarioError(path + ".range[" + std::to_string(b) + "]", e.what());
      }
    }
    if (a.is_human() && !a.range.empty()) throw ScenarioError(path + ".range", "humans have unbounded range");
    need_location(a.start, path + ".start");
  }
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto& p = parts[i];
    const std::string path = indexed("parts", i);
    claim(p.id, path);
    if (!(p.weight_kg > 0.0) || !std::isfinite(p.weight_kg)) throw ScenarioError(path + ".weight", "must be positive");
    if (!p.initial_location.empty()) need_location(p.initial_location, path + ".at");
  }
  for (std::size_t i = 0; i < locations.size(); ++i) {
    for (std::size_t k = 0; k < locations[i].reach_index.size(); ++k) {
      const auto& r = locations[i].reach_index[k];
      const std::string path = indexed("locations", i) + ".reach." + r.robot;
      const auto* a = find_agent(r.robot);
      if (!a || !a->is_robot()) throw ScenarioError(path, "unknown robot '" + r.robot + "'");
      if (!(r.index >= 0.0 && r.index <= 100.0)) throw ScenarioError(path, "must be within [0, 100]");
    }
  }
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const auto& p = paths[i];
    const std::string path = indexed("paths", i);
    claim(p.id, path);
    need_location(p.from, path + ".from");
    need_location(p.to, path + ".to");
    if (p.from == p.to) throw ScenarioError(path, "a path needs two distinct locations");
    const auto& w = p.trajectory.waypoints();
    if (distance(w.front(), find_location(p.from)->position) > kCoincide ||
        distance(w.back(), find_location(p.to)->position) > kCoincide)
      throw ScenarioError(path, "trajectory endpoints must coincide with the locations");
    if (path_between(p.from, p.to) != &p)
      throw ScenarioError(path, "a path between '" + p.from + "' and '" + p.to + "' already exists");
  }
  try {
    gains.validate();
  } catch (const Error& e) {
    throw ScenarioError("gains", e.what());
  }
  for (const auto& req : info_reqs.entries()) {
    const std::string path = "agents." + req.agent + ".requires";
    const auto* a = find_agent(req.agent);
    if (!a) throw ScenarioError(path, "unknown agent '" + req.agent + "'");
    if (!a->is_robot()) throw ScenarioError(path, "only robots declare information requirements");
    if (req.kind != ActionKind::Pick && req.kind != ActionKind::Place)
      throw ScenarioError(path, "requirements apply to PICK or PLACE");
    need_location(req.site, path);
    if (req.items.size() != 1) throw ScenarioError(path, "exactly one information item per requirement is supported");
  }
  for (const auto& [key, d] : safety_d) {
    const std::string path = "safety_d." + key;
    const auto at = key.find('@');
    const std::string site = at == std::string::npos ? key : key.substr(at + 1);
    if (at != std::string::npos && !find_agent(key.substr(0, at)))
      throw ScenarioError(path, "unknown agent '" + key.substr(0, at) + "'");
    if (!find_location(site) && !find_path(site)) throw ScenarioError(path, "unknown site '" + site + "'");
    if (!(d >= 0.0 && d <= 100.0)) throw ScenarioError(path, "must be within [0, 100]");
  }
  for (auto [name, v] :
       {std::pair{"pick", durations.pick}, std::pair{"place", durations.place}, std::pair{"move", durations.move},
        std::pair{"cooperate", durations.cooperate}, std::pair{"assemble", durations.assemble}}) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ScenarioError(std::string("durations.") + name, "must be positive");
  }
  if (goal.empty()) throw ScenarioError("goal", "empty goal");
  for (std::size_t i = 0; i < goal.size(); ++i) {
    const auto& g = goal[i];
    const std::string path = indexed("goal", i);
    if (g.args.size() != 2) throw ScenarioError(path, "expected two arguments");
    if (g.predicate == "at") {
      if (!find_part(g.args[0])) throw ScenarioError(path, "unknown part '" + g.args[0] + "'");
    } else if (g.predicate == "ee_at") {
      if (!find_agent(g.args[0])) throw ScenarioError(path, "unknown agent '" + g.args[0] + "'");
    } else {
      throw ScenarioError(path, "unsupported predicate '" + g.predicate + "'");
    }
    need_location(g.args[1], path);
  }
  std::set<std::string> outputs;
  for (std::size_t i = 0; i < assemble.size(); ++i) {
    const auto& r = assemble[i];
    const std::string path = indexed("assemble", i);
    if (r.inputs.size() != 2) throw ScenarioError(path + ".inputs", "exactly two inputs are supported");
    if (r.inputs[0] == r.inputs[1]) throw ScenarioError(path + ".inputs", "inputs must differ");
    for (const auto& in : r.inputs)
      if (!find_part(in)) throw ScenarioError(path + ".inputs", "unknown part '" + in + "'");
    const auto* out = find_part(r.output);
    if (!out) throw ScenarioError(path + ".output", "unknown part '" + r.output + "'");
    if (!out->initial_location.empty())
      throw ScenarioError(path + ".output", "an assembled part has no initial location");
    if (std::find(r.inputs.begin(), r.inputs.end(), r.output) != r.inputs.end())
      throw ScenarioError(path + ".output", "output cannot be an input");
    if (!outputs.insert(r.output).second) throw ScenarioError(path + ".output", "part produced twice");
    need_location(r.at, path + ".at");
  }
  for (std::size_t i = 0; i < reach_models.size(); ++i) {
    const auto& m = reach_models[i];
    const std::string path = indexed("reach_models", i);
    const auto* a = find_agent(m.robot);
    if (!a || !a->is_robot()) throw ScenarioError(path + ".robot", "unknown robot '" + m.robot + "'");
    if (!(m.link1_m > 0.0) || !(m.link2_m > 0.0)) throw ScenarioError(path, "link lengths must be positive");
    if (!(m.max_tilt_rad >= 0.0 && m.max_tilt_rad <= std::numbers::pi))
      throw ScenarioError(path + ".max_tilt", "must be within [0, pi]");
    if (m.samples == 0) throw ScenarioError(path + ".samples", "must be positive");
    if (!(m.radius_m > 0.0)) throw ScenarioError(path + ".radius", "must be positive");
  }
}

ScenarioConfig builtin_benchmark(int cycles) {
  if (cycles != 1 && cycles != 2) throw Error("the benchmark has 1 or 2 cycles");
  ScenarioConfig cfg;
  cfg.name = cycles == 1 ? "assembly-cycle-1" : "assembly-cycles-2";

  cfg.locations = {
      {"storage_1", {0.30, 0.45, 0.0}, {{"robot1", 96.0}}},
      {"storage_2", {1.30, 0.30, 0.0}, {{"robot2", 96.0}}},
      {"storage_3", {0.00, -0.75, 0.0}, {{"robot1", 11.0}}},
      {"workspace", {0.35, -0.10, 0.0}, {{"robot1", 54.5}, {"robot2", 54.5}}},
  };
  auto position = [&](const std::string& id) { return cfg.find_location(id)->position; };

  AgentSpec robot1;
  robot1.id = "robot1";
  robot1.kind = AgentKind::Robot;
  robot1.strength_limit_kg = 3.0;
  robot1.range.boxes = {{{-0.20, -0.90, -0.10}, {0.60, 0.60, 0.50}}};
  robot1.base = {0.0, 0.0, 0.0};
  robot1.start = "storage_1";
  AgentSpec robot2;
  robot2.id = "robot2";
  robot2.kind = AgentKind::Robot;
  robot2.strength_limit_kg = 3.0;
  robot2.range.boxes = {{{0.32, -0.30, -0.10}, {1.50, 0.40, 0.50}}};
  robot2.base = {0.70, -0.10, 0.0};
  robot2.start = "workspace";
  AgentSpec worker;
  worker.id = "worker";
  worker.kind = AgentKind::Human;
  worker.strength_limit_kg = 23.0;
  worker.base = {0.0, -0.85, 0.0};
  worker.start = "storage_3";
  cfg.agents = {robot1, robot2, worker};

  for (int c = 1; c <= cycles; ++c) {
    const std::string n = std::to_string(c);
    cfg.parts.push_back({"base_" + n, 0.135, "storage_1"});
    cfg.parts.push_back({"ring_" + n, 0.073, "storage_2"});
  }
  for (int c = 1; c <= cycles; ++c) {
    const std::string n = std::to_string(c);
    cfg.parts.push_back({"finished_" + n, 0.208, ""});
    cfg.assemble.push_back({{"base_" + n, "ring_" + n}, "finished_" + n, "workspace"});
    cfg.goal.push_back({"at", {"finished_" + n, "storage_3"}});
  }

  cfg.paths = {
      {"path_1", "storage_1", "workspace", Trajectory({position("storage_1"), position("workspace")})},
      {"path_2", "storage_2", "workspace", Trajectory({position("storage_2"), position("workspace")})},
      {"path_3", "workspace", "storage_3", Trajectory({position("workspace"), position("storage_3")})},
  };

  auto& g = cfg.gains;
  g.c_k[{AgentKind::Robot, ActionKind::Pick}] = 0.4;
  g.c_k[{AgentKind::Robot, ActionKind::Place}] = 0.4;
  g.c_k[{AgentKind::Robot, ActionKind::Move}] = 0.6;
  g.c_k[{AgentKind::Human, ActionKind::Pick}] = 0.1;
  g.c_k[{AgentKind::Human, ActionKind::Place}] = 0.1;
  g.c_k[{AgentKind::Human, ActionKind::Move}] = 0.4;
  g.k_c = 3.0;
  g.c_h = 0.2;
  g.c_r = 1.0;

  cfg.info_reqs.require("robot2", ActionKind::Place, "workspace", {"coord(base_1)"});

  // Activity levels d for the safety cost, solved from the published safety values c:
  // d = 100 c / (1 + C_K) for robots and 100 c / (C_I + C_K) for the worker (C_I = 3).
  cfg.safety_d = {
      {"worker@storage_1", 96.0},          {"worker@storage_2", 96.0},       {"worker@storage_3", 13.0322580645},
      {"worker@workspace", 20.5483870968}, {"worker@path_1", 87.5294117647}, {"worker@path_2", 87.5294117647},
      {"worker@path_3", 18.7352941176},    {"robot1@storage_1", 0.0},        {"robot1@storage_3", 0.0},
      {"robot1@workspace", 45.5},          {"robot1@path_1", 39.8125},       {"robot1@path_3", 0.0},
      {"robot2@storage_2", 0.0},           {"robot2@workspace", 45.5},       {"robot2@path_2", 39.8125},
  };
  cfg.validate();
  return cfg;
}

// ---------------------------------------------------------------------------------
// Compilation

namespace {

using pddl::ActionSchema;
using pddl::Atom;
using pddl::FluentTerm;
using pddl::Literal;
using pddl::TypedName;

Literal pos(std::string pred, std::vector<std::string> args) { return {{std::move(pred), std::move(args)}, false}; }
Literal neg(std::string pred, std::vector<std::string> args) { return {{std::move(pred), std::move(args)}, true}; }
Atom atom(std::string pred, std::vector<std::string> args) { return {std::move(pred), std::move(args)}; }

std::vector<std::string> names_of(const std::vector<TypedName>& params) {
  std::vector<std::string> out;
  for (const auto& p : params) out.push_back(p.name);
  return out;
}

ActionSchema schema(std::string name, std::vector<TypedName> params, double duration) {
  ActionSchema a;
  a.name = std::move(name);
  a.params = std::move(params);
  a.duration = duration;
  a.cost = FluentTerm{a.name + "-cost", names_of(a.params)};
  return a;
}

pddl::DomainAst build_domain(const ScenarioConfig& cfg) {
  pddl::DomainAst d;
  d.name = "collaborative-cell";
  d.requirements = {":typing", ":negative-preconditions", ":action-costs", ":durative-actions"};
  d.types = {{"agent", "object"}, {"human", "agent"},     {"robot", "agent"},
             {"part", "object"},  {"location", "object"}, {"info", "object"}};
  d.predicates = {
      {"ee_at", {{"?a", "agent"}, {"?l", "location"}}},
      {"at", {{"?p", "part"}, {"?l", "location"}}},
      {"holding", {{"?a", "agent"}, {"?p", "part"}}},
      {"handempty", {{"?a", "agent"}}},
      {"connected", {{"?from", "location"}, {"?to", "location"}}},
      {"recipe", {{"?b", "part"}, {"?r", "part"}, {"?f", "part"}, {"?l", "location"}}},
      {"pending", {{"?f", "part"}}},
      {"knows", {{"?a", "robot"}, {"?i", "info"}}},
      {"needs-pick", {{"?a", "robot"}, {"?l", "location"}, {"?i", "info"}}},
      {"needs-place", {{"?a", "robot"}, {"?l", "location"}, {"?i", "info"}}},
  };

  const TypedName a{"?a", "agent"}, r{"?a", "robot"}, p{"?p", "part"}, l{"?l", "location"}, i{"?i", "info"};
  const TypedName from{"?from", "location"}, to{"?to", "location"};
  const auto& dur = cfg.durations;

  auto pick = schema("pick", {a, p, l}, dur.pick);
  pick.precondition = {pos("ee_at", {"?a", "?l"}), pos("at", {"?p", "?l"}), pos("handempty", {"?a"})};
  pick.add = {atom("holding", {"?a", "?p"})};
  pick.del = {atom("at", {"?p", "?l"}), atom("handempty", {"?a"})};

  auto pick_informed = schema("pick-informed", {r, p, l, i}, dur.pick);
  pick_informed.precondition = pick.precondition;
  pick_informed.precondition.push_back(pos("needs-pick", {"?a", "?l", "?i"}));
  pick_informed.precondition.push_back(pos("knows", {"?a", "?i"}));
  pick_informed.add = pick.add;
  pick_informed.del = pick.del;

  auto place = schema("place", {a, p, l}, dur.place);
  place.precondition = {pos("ee_at", {"?a", "?l"}), pos("holding", {"?a", "?p"})};
  place.add = {atom("at", {"?p", "?l"}), atom("handempty", {"?a"})};
  place.del = {atom("holding", {"?a", "?p"})};

  auto place_informed = schema("place-informed", {r, p, l, i}, dur.place);
  place_informed.precondition = place.precondition;
  place_informed.precondition.push_back(pos("needs-place", {"?a", "?l", "?i"}));
  place_informed.precondition.push_back(pos("knows", {"?a", "?i"}));
  place_informed.add = place.add;
  place_informed.del = place.del;

  auto move = schema("move", {a, from, to, p}, dur.move);
  move.precondition = {pos("connected", {"?from", "?to"}), pos("ee_at", {"?a", "?from"}), pos("holding", {"?a", "?p"})};
  move.add = {atom("ee_at", {"?a", "?to"})};
  move.del = {atom("ee_at", {"?a", "?from"})};

  auto move_empty = schema("move-empty", {a, from, to}, dur.move);
  move_empty.precondition = {pos("connected", {"?from", "?to"}), pos("ee_at", {"?a", "?from"}),
                             pos("handempty", {"?a"})};
  move_empty.add = move.add;
  move_empty.del = move.del;

  auto guide = schema("cooperate-guide", {{"?h", "human"}, {"?r", "robot"}, p, l, i}, dur.cooperate);
  guide.precondition = {pos("holding", {"?r", "?p"}),
                        pos("ee_at", {"?r", "?l"}),
                        pos("ee_at", {"?h", "?l"}),
                        pos("handempty", {"?h"}),
                        pos("needs-place", {"?r", "?l", "?i"}),
                        neg("knows", {"?r", "?i"})};
  guide.add = {atom("at", {"?p", "?l"}), atom("handempty", {"?r"}), atom("knows", {"?r", "?i"})};
  guide.del = {atom("holding", {"?r", "?p"})};

  ActionSchema assemble;
  assemble.name = "assemble";
  assemble.params = {{"?b", "part"}, {"?r", "part"}, {"?f", "part"}, l};
  assemble.duration = dur.assemble;
  assemble.precondition = {pos("recipe", {"?b", "?r", "?f", "?l"}), pos("pending", {"?f"}), pos("at", {"?b", "?l"}),
                           pos("at", {"?r", "?l"})};
  assemble.add = {atom("at", {"?f", "?l"})};
  assemble.del = {atom("at", {"?b", "?l"}), atom("at", {"?r", "?l"}), atom("pending", {"?f"})};

  d.actions = {pick, pick_informed, place, place_informed, move, move_empty, guide, assemble};
  d.functions.push_back({"total-cost", {}});
  for (const auto& act : d.actions)
    if (act.cost) d.functions.push_back({std::get<FluentTerm>(*act.cost).name, act.params});
  return d;
}

std::vector<std::string> info_objects(const ScenarioConfig& cfg) {
  std::set<std::string> items;
  for (const auto& e : cfg.info_reqs.entries())
    for (const auto& it : e.items) items.insert(info_object_name(it));
  for (const auto& a : cfg.agents)
    if (a.is_robot())
      for (const auto& it : a.known_info) items.insert(info_object_name(it));
  return {items.begin(), items.end()};
}

pddl::ProblemAst build_problem(const ScenarioConfig& cfg, const pddl::DomainAst& domain) {
  pddl::ProblemAst pr;
  pr.name = cfg.name;
  pr.domain_name = domain.name;
  for (const auto& a : cfg.agents) pr.objects.push_back({a.id, a.is_human() ? "human" : "robot"});
  for (const auto& p : cfg.parts) pr.objects.push_back({p.id, "part"});
  for (const auto& l : cfg.locations) pr.objects.push_back({l.id, "location"});
  for (const auto& i : info_objects(cfg)) pr.objects.push_back({i, "info"});

  for (const auto& a : cfg.agents) {
    pr.init.push_back(atom("ee_at", {a.id, a.start}));
    pr.init.push_back(atom("handempty", {a.id}));
    if (a.is_robot())
      for (const auto& it : a.known_info) pr.init.push_back(atom("knows", {a.id, info_object_name(it)}));
  }
  for (const auto& p : cfg.parts)
    if (!p.initial_location.empty()) pr.init.push_back(atom("at", {p.id, p.initial_location}));
  for (const auto& p : cfg.paths) {
    pr.init.push_back(atom("connected", {p.from, p.to}));
    pr.init.push_back(atom("connected", {p.to, p.from}));
  }
  for (const auto& r : cfg.assemble) {
    pr.init.push_back(atom("recipe", {r.inputs[0], r.inputs[1], r.output, r.at}));
    pr.init.push_back(atom("pending", {r.output}));
  }
  for (const auto& e : cfg.info_reqs.entries()) {
    const std::string pred = e.kind == ActionKind::Pick ? "needs-pick" : "needs-place";
    for (const auto& it : e.items) pr.init.push_back(atom(pred, {e.agent, e.site, info_object_name(it)}));
  }
  pr.numeric_init.push_back({{"total-cost", {}}, 0.0});
  pr.goal = cfg.goal;
  pr.minimize_total_cost = true;
  return pr;
}

}  // namespace

pddl::CostProvider table_cost_provider(const ScenarioConfig& cfg, const CostTable& table) {
  return [&cfg, &table](const ActionSchema& s, std::span<const std::string> args) -> std::optional<ExtCost> {
    auto total = [](const CostEntry* e) -> std::optional<ExtCost> {
      if (!e) return std::nullopt;
      return e->total;
    };
    auto informed = [&](ActionKind kind) -> std::optional<ExtCost> {
      if (const auto* e = table.find({args[0]}, kind, args[2], args[1], KnowledgePhase::Informed)) return e->total;
      // The robot knew the item from the start: the initial row is already informed.
      return total(table.find({args[0]}, kind, args[2], args[1]));
    };
    if (s.name == "pick") return total(table.find({args[0]}, ActionKind::Pick, args[2], args[1]));
    if (s.name == "place") return total(table.find({args[0]}, ActionKind::Place, args[2], args[1]));
    if (s.name == "pick-informed") return informed(ActionKind::Pick);
    if (s.name == "place-informed") return informed(ActionKind::Place);
    if (s.name == "move" || s.name == "move-empty") {
      const auto* path = cfg.path_between(args[1], args[2]);
      if (!path) return std::nullopt;
      std::optional<std::string> part;
      if (s.name == "move") part = args[3];
      return total(table.find({args[0]}, ActionKind::Move, path->id, part));
    }
    if (s.name == "cooperate-guide")
      return total(table.find({args[0], args[1]}, ActionKind::Cooperate, args[3], args[2]));
    return std::nullopt;
  };
}

CompiledProblem compile(const ScenarioConfig& cfg) {
  cfg.validate();
  CompiledProblem out;
  out.cost_table = build_cost_table(cfg);
  out.domain = build_domain(cfg);
  out.problem = build_problem(cfg, out.domain);
  const auto provider = table_cost_provider(cfg, out.cost_table);

  // Materialize every finite instantiation's cost as a fluent so external planners see
  // the same numbers.
  pddl::GroundOptions all;
  all.prune_unreachable = false;
  const auto full = pddl::ground(out.domain, out.problem, provider, all);
  for (const auto& op : full.ops) {
    if (op.schema == "assemble") continue;
    out.problem.numeric_init.push_back({{op.schema + "-cost", op.args}, op.cost.value()});
  }
  out.grounded = pddl::ground(out.domain, out.problem, provider);
  return out;
}

}  // namespace hrcplan
