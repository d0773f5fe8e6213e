#include "hrcplan/cost.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hrcplan/capability.hpp"
#include "hrcplan/error.hpp"
#include "hrcplan/scenario.hpp"

namespace hrcplan {

double CostGains::risk(AgentKind agent, ActionKind action) const {
  auto it = c_k.find({agent, action});
  return it == c_k.end() ? 0.0 : it->second;
}

void CostGains::validate() const {
  auto check = [](double v, const std::string& what) {
    if (!std::isfinite(v) || v < 0.0) throw Error("gain " + what + " must be a finite non-negative number");
  };
  for (const auto& [key, v] : c_k)
    check(v, "c_k(" + std::string(to_string(key.first)) + ", " + std::string(to_string(key.second)) + ")");
  check(k_c, "k_c");
  check(c_h, "c_h");
  check(c_r, "c_r");
}

void InfoRequirements::require(const std::string& agent, ActionKind kind, const std::string& site,
                               std::set<std::string> items) {
  auto& slot = items_[{agent, kind, site}];
  slot.insert(items.begin(), items.end());
}

const std::set<std::string>& InfoRequirements::lookup(const std::string& agent, ActionKind kind,
                                                      const std::string& site) const {
  static const std::set<std::string> kEmpty;
  auto it = items_.find({agent, kind, site});
  return it == items_.end() ? kEmpty : it->second;
}

std::vector<InfoRequirements::Entry> InfoRequirements::entries() const {
  std::vector<Entry> out;
  for (const auto& [key, items] : items_) out.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), items});
  return out;
}

double strength_criterion(const AgentSpec& agent, const PartSpec& part) {
  return 1.0 - part.weight_kg / agent.strength_limit_kg;
}

ExtCost strength_cost(const AgentSpec& agent, const PartSpec& part) {
  return strength_criterion(agent, part) > 0.0 ? ExtCost::zero() : ExtCost::infinity();
}

ExtCost information_cost(const AgentSpec& agent, const std::set<std::string>& required) {
  if (agent.is_human()) return ExtCost::zero();
  const bool known = std::includes(agent.known_info.begin(), agent.known_info.end(), required.begin(), required.end());
  return known ? ExtCost::zero() : ExtCost::infinity();
}

ExtCost information_cost(const AgentSpec& agent, const GroundAction& action, const InfoRequirements& reqs) {
  return information_cost(agent, reqs.lookup(agent.id, action.kind, action.at));
}

ExtCost flexibility_cost(const AgentSpec& agent, const Point3& target) {
  if (agent.is_human()) return ExtCost::zero();
  return region_contains(agent.range, target) ? ExtCost::zero() : ExtCost::infinity();
}

Point3 farthest_point(const Trajectory& t, const Point3& base) {
  const auto& w = t.waypoints();
  // Strict comparison keeps the first waypoint on ties.
  Point3 best = w.front();
  double best_d = distance(best, base);
  for (const auto& p : w) {
    const double d = distance(p, base);
    if (d > best_d) {
      best = p;
      best_d = d;
    }
  }
  return best;
}

ExtCost reachability_cost(const AgentSpec& agent, double d) {
  if (agent.is_human()) return ExtCost::zero();
  if (!(d >= 0.0 && d <= 100.0)) throw Error("reachability index out of range");
  if (d > 60.0) return ExtCost::zero();
  if (d > 20.0) return ExtCost(1.0 - d / 100.0);
  if (d == 0.0) return ExtCost::infinity();
  return ExtCost(100.0 / d);
}

double intersection_coefficient(const Trajectory& worker_trajectory, std::span<const Region> robot_ranges, double k_c) {
  for (const auto& r : robot_ranges)
    if (trajectory_intersects(worker_trajectory, r)) return k_c;
  return 0.0;
}

ExtCost safety_cost(const AgentSpec& agent, ActionKind kind, double d, double c_i, const CostGains& gains) {
  if (!(d >= 0.0 && d <= 100.0)) throw Error("safety activity level out of range");
  const double c_k = gains.risk(agent.kind, kind);
  const double weight = agent.is_robot() ? 1.0 + c_k : c_i + c_k;
  return ExtCost(weight * d / 100.0);
}

namespace {

double worker_intersection(const ActionContext& ctx) {
  if (ctx.worker_path.empty()) return 0.0;
  if (ctx.worker_path.size() == 1 || std::all_of(ctx.worker_path.begin(), ctx.worker_path.end(),
                                                 [&](const Point3& p) { return p == ctx.worker_path.front(); })) {
    for (const auto& r : ctx.robot_ranges)
      if (region_contains(r, ctx.worker_path.front())) return ctx.gains->k_c;
    return 0.0;
  }
  std::vector<Point3> w;
  for (const auto& p : ctx.worker_path)
    if (w.empty() || !(w.back() == p)) w.push_back(p);
  return intersection_coefficient(Trajectory(std::move(w)), ctx.robot_ranges, ctx.gains->k_c);
}

}  // namespace

CostBreakdown agent_action_cost(const AgentSpec& agent, const ActionContext& ctx) {
  if (ctx.gains == nullptr) throw Error("action context without gains");
  CostBreakdown b;
  b.f_s = ctx.part ? strength_cost(agent, *ctx.part) : ExtCost::zero();
  b.f_i = ctx.info_known ? ExtCost::zero() : information_cost(agent, ctx.required_info);
  b.f_r = flexibility_cost(agent, ctx.target);
  if (b.feasibility().is_infinite()) {
    b.determined = false;
    b.total = ExtCost::infinity();
    return b;
  }
  if (agent.is_robot()) {
    if (!ctx.reach_d) throw Error("no reachability index for robot " + agent.id);
    b.r_r = reachability_cost(agent, *ctx.reach_d);
  } else {
    b.intersection = worker_intersection(ctx);
  }
  b.c_s = safety_cost(agent, ctx.kind, ctx.safety_d, b.intersection, *ctx.gains);
  if (ctx.gains->double_count_ci) b.c_i = ExtCost(b.intersection);
  b.total = ExtCost(1.0) + b.f_s + b.f_i + b.f_r + b.r_r + b.c_i + b.c_s;
  return b;
}

double cooperation_criterion(std::span<const AgentKind> agents, const CostGains& gains) {
  if (agents.empty()) throw Error("cooperation needs at least one agent");
  const bool any_human = std::find(agents.begin(), agents.end(), AgentKind::Human) != agents.end();
  const bool any_robot = std::find(agents.begin(), agents.end(), AgentKind::Robot) != agents.end();
  double coeff = 0.0;
  if (any_human && any_robot)
    coeff = (gains.c_h + gains.c_r) / 2.0;
  else if (any_human)
    coeff = gains.c_h;
  else
    coeff = gains.c_r;
  return std::pow(1.0 + coeff, static_cast<double>(agents.size() - 1));
}

ExtCost cooperative_cost(std::span<const AgentSpec> agents, std::span<const ActionContext> solo_contexts,
                         const CostGains& gains) {
  if (agents.empty()) throw Error("cooperation needs at least one agent");
  if (agents.size() != solo_contexts.size()) throw Error("one context per cooperating agent required");
  const bool guided = std::any_of(agents.begin(), agents.end(), [](const AgentSpec& a) { return a.is_human(); });
  std::vector<AgentKind> kinds;
  ExtCost sum;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    kinds.push_back(agents[i].kind);
    ActionContext ctx = solo_contexts[i];
    if (guided && agents[i].is_robot()) ctx.info_known = true;
    sum += agent_action_cost(agents[i], ctx).total;
  }
  if (sum.is_infinite()) return ExtCost::infinity();
  const double mean = sum.value() / static_cast<double>(agents.size());
  return ExtCost(cooperation_criterion(kinds, gains) * mean);
}

std::string CostEntry::param() const {
  std::string s = site;
  if (part) s += ":" + *part;
  if (phase == KnowledgePhase::Informed) s += ":informed";
  return s;
}

const CostEntry* CostTable::find(const std::vector<std::string>& agents, ActionKind kind, const std::string& site,
                                 const std::optional<std::string>& part, KnowledgePhase phase) const {
  for (const auto& e : entries_)
    if (e.agents == agents && e.kind == kind && e.site == site && e.part == part && e.phase == phase) return &e;
  return nullptr;
}

namespace {

std::string join_agents(const std::vector<std::string>& agents) {
  std::string s;
  for (const auto& a : agents) s += (s.empty() ? "" : "+") + a;
  return s;
}

std::string short_number(ExtCost c) {
  if (c.is_infinite()) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", c.value());
  std::string s = buf;
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return s;
}

bool is_joint(const CostEntry& e) { return e.agents.size() > 1; }

}  // namespace

std::string CostTable::to_csv() const {
  std::ostringstream os;
  os << "agent,action,param,f_s,f_i,f_r,r_r,c_i,c_s,total\n";
  for (const auto& e : entries_) {
    const auto& b = e.breakdown;
    os << join_agents(e.agents) << ',' << to_string(e.kind) << ',' << e.param();
    if (is_joint(e)) {
      os << ",n/a,n/a,n/a,n/a,n/a,n/a";
    } else {
      os << ',' << b.f_s.to_string() << ',' << b.f_i.to_string() << ',' << b.f_r.to_string();
      for (ExtCost c : {b.r_r, b.c_i, b.c_s}) os << ',' << (b.determined ? c.to_string() : std::string("n/a"));
    }
    os << ',' << e.total.to_string() << '\n';
  }
  return os.str();
}

namespace {

nlohmann::ordered_json cost_json(ExtCost c) {
  if (c.is_infinite()) return "inf";
  return c.value();
}

nlohmann::ordered_json breakdown_json(const CostBreakdown& b) {
  nlohmann::ordered_json j;
  j["f_s"] = cost_json(b.f_s);
  j["f_i"] = cost_json(b.f_i);
  j["f_r"] = cost_json(b.f_r);
  if (b.determined) {
    j["r_r"] = cost_json(b.r_r);
    j["c_i"] = cost_json(b.c_i);
    j["c_s"] = cost_json(b.c_s);
  } else {
    j["r_r"] = nullptr;
    j["c_i"] = nullptr;
    j["c_s"] = nullptr;
  }
  j["intersection"] = b.intersection;
  j["total"] = cost_json(b.total);
  return j;
}

}  // namespace

std::string CostTable::to_json() const {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& e : entries_) {
    nlohmann::ordered_json j;
    j["agents"] = e.agents;
    j["action"] = std::string(to_string(e.kind));
    if (e.kind != e.base_kind) j["base_action"] = std::string(to_string(e.base_kind));
    j["site"] = e.site;
    j["part"] = e.part ? nlohmann::ordered_json(*e.part) : nlohmann::ordered_json(nullptr);
    j["phase"] = e.phase == KnowledgePhase::Informed ? "informed" : "initial";
    j["state_dependent"] = e.state_dependent;
    if (is_joint(e)) {
      j["cooperation"] = e.cooperation;
      auto members = nlohmann::ordered_json::array();
      for (const auto& m : e.members) members.push_back(breakdown_json(m));
      j["members"] = members;
    } else {
      j["breakdown"] = breakdown_json(e.breakdown);
    }
    j["total"] = cost_json(e.total);
    rows.push_back(j);
  }
  return rows.dump(2) + "\n";
}

std::string CostTable::to_matrix() const {
  std::vector<std::string> agents;
  std::vector<std::string> locations;
  std::vector<std::string> paths;
  auto remember = [](std::vector<std::string>& v, const std::string& x) {
    if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
  };
  for (const auto& e : entries_) {
    if (is_joint(e)) continue;
    remember(agents, e.agents.front());
    remember(e.kind == ActionKind::Move ? paths : locations, e.site);
  }
  auto cell = [&](const std::string& agent, const std::string& site, bool move) {
    std::vector<ExtCost> totals;
    for (const auto& e : entries_) {
      if (is_joint(e) || e.agents.front() != agent || e.site != site) continue;
      if ((e.kind == ActionKind::Move) != move) continue;
      totals.push_back(e.total);
    }
    std::sort(totals.begin(), totals.end(), [](ExtCost a, ExtCost b) { return a < b; });
    std::string s;
    for (std::size_t i = 0; i < totals.size(); ++i) {
      if (i > 0 && totals[i] == totals[i - 1]) continue;
      s += (s.empty() ? "" : "/") + short_number(totals[i]);
    }
    return s.empty() ? std::string("-") : s;
  };
  std::ostringstream os;
  auto block = [&](const char* title, const std::vector<std::string>& sites, bool move) {
    if (sites.empty()) return;
    os << title;
    for (const auto& s : sites) os << ',' << s;
    os << '\n';
    for (const auto& a : agents) {
      os << a;
      for (const auto& s : sites) os << ',' << cell(a, s, move);
      os << '\n';
    }
  };
  block("PICK/PLACE", locations, false);
  if (!locations.empty() && !paths.empty()) os << '\n';
  block("MOVE", paths, true);
  return os.str();
}

namespace {

constexpr double kCoincide = 1e-6;

const LocationSpec& location_or_throw(const ScenarioConfig& cfg, const std::string& id) {
  const auto* loc = cfg.find_location(id);
  if (!loc) throw Error("unknown location '" + id + "'");
  return *loc;
}

std::optional<double> pinned_safety(const ScenarioConfig& cfg, const std::string& agent, const std::string& site) {
  if (auto it = cfg.safety_d.find(agent + "@" + site); it != cfg.safety_d.end()) return it->second;
  if (auto it = cfg.safety_d.find(site); it != cfg.safety_d.end()) return it->second;
  return std::nullopt;
}

class TableBuilder {
 public:
  explicit TableBuilder(const ScenarioConfig& cfg) : cfg_(cfg) {
    for (const auto& a : cfg.agents)
      if (a.is_robot()) ranges_.push_back(a.range);
  }

  CostTable build() {
    for (const auto& e : cfg_.info_reqs.entries()) {
      const auto* a = cfg_.find_agent(e.agent);
      if (!a) throw Error("unknown agent '" + e.agent + "' in information requirements");
      if (e.kind == ActionKind::Move) {
        if (!cfg_.find_path(e.site)) throw Error("unknown path '" + e.site + "' in information requirements");
      } else {
        location_or_throw(cfg_, e.site);
      }
    }
    CostTable table;
    for (const auto& agent : cfg_.agents) {
      for (ActionKind kind : {ActionKind::Pick, ActionKind::Place})
        for (const auto& loc : cfg_.locations)
          for (const auto& part : cfg_.parts) add_solo(table, agent, kind, loc.id, &part);
      for (const auto& path : cfg_.paths) {
        add_solo(table, agent, ActionKind::Move, path.id, nullptr);
        for (const auto& part : cfg_.parts) add_solo(table, agent, ActionKind::Move, path.id, &part);
      }
    }
    add_guided(table);
    return table;
  }

  ActionContext context(const AgentSpec& agent, ActionKind kind, const std::string& site, const PartSpec* part,
                        bool informed) const {
    ActionContext ctx;
    ctx.kind = kind;
    ctx.part = part;
    ctx.gains = &cfg_.gains;
    ctx.robot_ranges = ranges_;
    ctx.required_info = cfg_.info_reqs.lookup(agent.id, kind, site);
    ctx.info_known = informed;
    if (kind == ActionKind::Move) {
      const auto* path = cfg_.find_path(site);
      if (!path) throw Error("unknown path '" + site + "'");
      ctx.target = farthest_point(path->trajectory, agent.base);
      ctx.worker_path = path->trajectory.waypoints();
    } else {
      ctx.target = location_or_throw(cfg_, site).position;
      ctx.worker_path = {agent.base, ctx.target};
    }
    // D and activity levels are only needed when the feasibility gates pass.
    const bool feasible = (!part || strength_cost(agent, *part).is_finite()) &&
                          flexibility_cost(agent, ctx.target).is_finite() &&
                          (informed || information_cost(agent, ctx.required_info).is_finite());
    if (!feasible) return ctx;
    if (agent.is_robot()) ctx.reach_d = reach_index_at(cfg_, agent, ctx.target);
    if (auto pinned = pinned_safety(cfg_, agent.id, site))
      ctx.safety_d = *pinned;
    else
      ctx.safety_d = default_activity(agent, kind, site, ctx);
    return ctx;
  }

 private:
  double default_activity(const AgentSpec& agent, ActionKind kind, const std::string& site,
                          const ActionContext& ctx) const {
    if (agent.is_robot()) return *ctx.reach_d;
    if (kind == ActionKind::Move) {
      const auto* path = cfg_.find_path(site);
      return std::max(activity_near(location_or_throw(cfg_, path->from).position),
                      activity_near(location_or_throw(cfg_, path->to).position));
    }
    return activity_near(ctx.target);
  }

  /// Highest D among robots whose range holds `p`.
  double activity_near(const Point3& p) const {
    double d = 0.0;
    for (const auto& r : cfg_.agents)
      if (r.is_robot() && region_contains(r.range, p)) d = std::max(d, reach_index_at(cfg_, r, p));
    return d;
  }

  void add_solo(CostTable& table, const AgentSpec& agent, ActionKind kind, const std::string& site,
                const PartSpec* part) {
    const auto& required = cfg_.info_reqs.lookup(agent.id, kind, site);
    const bool gated = agent.is_robot() && information_cost(agent, required).is_infinite();
    for (bool informed : {false, true}) {
      if (informed && !gated) break;
      CostEntry e;
      e.agents = {agent.id};
      e.kind = e.base_kind = kind;
      e.site = site;
      if (part) e.part = part->id;
      e.phase = informed ? KnowledgePhase::Informed : KnowledgePhase::Initial;
      e.state_dependent = gated;
      e.breakdown = agent_action_cost(agent, context(agent, kind, site, part, informed));
      e.members = {e.breakdown};
      e.total = e.breakdown.total;
      table.add(std::move(e));
    }
  }

  void add_guided(CostTable& table) {
    for (const auto& req : cfg_.info_reqs.entries()) {
      if (req.kind != ActionKind::Place) continue;
      const auto* robot = cfg_.find_agent(req.agent);
      if (!robot->is_robot() || information_cost(*robot, req.items).is_finite()) continue;
      for (const auto& human : cfg_.agents) {
        if (!human.is_human()) continue;
        for (const auto& part : cfg_.parts) {
          const std::vector<AgentSpec> members = {human, *robot};
          const std::vector<ActionContext> contexts = {context(human, ActionKind::Place, req.site, &part, false),
                                                       context(*robot, ActionKind::Place, req.site, &part, true)};
          CostEntry e;
          e.agents = {human.id, robot->id};
          e.kind = ActionKind::Cooperate;
          e.base_kind = ActionKind::Place;
          e.site = req.site;
          e.part = part.id;
          for (std::size_t i = 0; i < members.size(); ++i) {
            ActionContext c = contexts[i];
            e.members.push_back(agent_action_cost(members[i], c));
          }
          const AgentKind kinds[] = {human.kind, robot->kind};
          e.cooperation = cooperation_criterion(kinds, cfg_.gains);
          e.total = cooperative_cost(members, contexts, cfg_.gains);
          e.breakdown.total = e.total;
          e.breakdown.determined = false;
          table.add(std::move(e));
        }
      }
    }
  }

  const ScenarioConfig& cfg_;
  std::vector<Region> ranges_;
};

}  // namespace

double reach_index_at(const ScenarioConfig& cfg, const AgentSpec& robot, const Point3& p) {
  for (const auto& loc : cfg.locations) {
    if (distance(loc.position, p) > kCoincide) continue;
    if (auto d = loc.reach_for(robot.id)) return *d;
  }
  if (const auto* model = cfg.find_reach_model(robot.id)) {
    PlanarTwoLinkArm arm(robot.base, model->link1_m, model->link2_m, model->max_tilt_rad);
    return reachability_index(arm, p, model->samples, model->seed, model->radius_m);
  }
  std::ostringstream os;
  os << "no reachability index for robot " << robot.id << " at (" << p.x << ", " << p.y << ", " << p.z << ")";
  throw Error(os.str());
}

CostTable build_cost_table(const ScenarioConfig& scenario) { return TableBuilder(scenario).build(); }

}  // namespace hrcplan
