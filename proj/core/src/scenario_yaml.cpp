// Scenario documents in YAML.

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "hrcplan/error.hpp"
#include "hrcplan/scenario.hpp"

namespace hrcplan {

namespace {

enum class Unit { None, Length, Mass, Time };

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

/// A node together with its path in the document, for error messages.
class Field {
 public:
  Field(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  bool present() const { return node_.IsDefined() && !node_.IsNull(); }

  [[noreturn]] void fail(const std::string& msg) const { throw ScenarioError(path_, msg); }

  Field operator[](const std::string& key) const {
    if (!node_.IsMap()) fail("expected a mapping");
    return Field(node_[key], path_.empty() ? key : path_ + "." + key);
  }

  Field at(std::size_t i) const { return Field(node_[i], path_ + "[" + std::to_string(i) + "]"); }

  Field required(const std::string& key) const {
    Field f = (*this)[key];
    if (!f.present()) f.fail("missing");
    return f;
  }

  /// Rejects keys outside `allowed`.
  void only(std::initializer_list<const char*> allowed) const {
    if (!node_.IsMap()) fail("expected a mapping");
    for (const auto& kv : node_) {
      const std::string key = kv.first.as<std::string>();
      bool ok = false;
      for (const char* a : allowed) ok = ok || key == a;
      if (!ok) fail("unknown key '" + key + "'");
    }
  }

  std::size_t size() const {
    if (!present()) return 0;
    if (!node_.IsSequence()) fail("expected a list");
    return node_.size();
  }

  std::vector<std::pair<std::string, Field>> entries() const {
    std::vector<std::pair<std::string, Field>> out;
    if (!present()) return out;
    if (!node_.IsMap()) fail("expected a mapping");
    for (const auto& kv : node_) {
      const std::string key = kv.first.as<std::string>();
      out.emplace_back(key, Field(kv.second, path_.empty() ? key : path_ + "." + key));
    }
    return out;
  }

  std::string text() const {
    if (!node_.IsScalar()) fail("expected a scalar");
    return node_.Scalar();
  }

  std::string id() const { return lower(text()); }

  bool boolean() const {
    const std::string t = lower(text());
    if (t == "true" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "no" || t == "off") return false;
    fail("expected true or false");
  }

  double number(Unit unit = Unit::None) const {
    const std::string t = text();
    double v = 0.0;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr == first) fail("expected a number");
    std::string suffix(ptr, last);
    while (!suffix.empty() && suffix.front() == ' ') suffix.erase(suffix.begin());
    suffix = lower(suffix);
    double divisor = 1.0;
    if (!suffix.empty()) {
      if (unit == Unit::Length && suffix == "m") {
      } else if (unit == Unit::Length && suffix == "cm") {
        divisor = 100.0;
      } else if (unit == Unit::Length && suffix == "mm") {
        divisor = 1000.0;
      } else if (unit == Unit::Mass && suffix == "kg") {
      } else if (unit == Unit::Mass && suffix == "g") {
        divisor = 1000.0;
      } else if (unit == Unit::Time && suffix == "s") {
      } else {
        fail("unexpected unit '" + suffix + "'");
      }
    }
    if (!std::isfinite(v)) fail("expected a finite number");
    return v / divisor;
  }

  Point3 point() const {
    if (!node_.IsSequence() || node_.size() != 3) fail("expected [x, y, z]");
    return {at(0).number(Unit::Length), at(1).number(Unit::Length), at(2).number(Unit::Length)};
  }

  std::vector<std::string> ids() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < size(); ++i) out.push_back(at(i).id());
    return out;
  }

  std::vector<std::string> texts() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < size(); ++i) out.push_back(at(i).text());
    return out;
  }

 private:
  YAML::Node node_;
  std::string path_;
};

ActionKind action_kind(const Field& f) {
  auto k = parse_action_kind(f.text());
  if (!k) f.fail("unknown action '" + f.text() + "'");
  return *k;
}

AgentKind agent_kind(const Field& f) {
  auto k = parse_agent_kind(lower(f.text()));
  if (!k) f.fail("unknown agent kind '" + f.text() + "'");
  return *k;
}

/// `at(finished_1, storage_3)`
pddl::Atom goal_atom(const Field& f) {
  const std::string t = f.text();
  const auto open = t.find('(');
  const auto close = t.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open || close + 1 != t.size())
    f.fail("expected predicate(arg, ...)");
  pddl::Atom a;
  a.predicate = lower(t.substr(0, open));
  while (!a.predicate.empty() && a.predicate.back() == ' ') a.predicate.pop_back();
  std::stringstream args(t.substr(open + 1, close - open - 1));
  std::string arg;
  while (std::getline(args, arg, ',')) {
    const auto b = arg.find_first_not_of(' ');
    const auto e = arg.find_last_not_of(' ');
    if (b == std::string::npos) f.fail("empty argument");
    a.args.push_back(lower(arg.substr(b, e - b + 1)));
  }
  return a;
}

void read_agents(const Field& list, ScenarioConfig& cfg) {
  for (std::size_t i = 0; i < list.size(); ++i) {
    const Field f = list.at(i);
    f.only({"id", "kind", "strength", "base", "start", "range", "knows", "requires"});
    AgentSpec a;
    a.id = f.required("id").id();
    a.kind = agent_kind(f.required("kind"));
    a.strength_limit_kg = f.required("strength").number(Unit::Mass);
    if (f["base"].present()) a.base = f["base"].point();
    a.start = f.required("start").id();
    const Field range = f["range"];
    for (std::size_t b = 0; b < range.size(); ++b) {
      const Field box = range.at(b);
      box.only({"min", "max"});
      a.range.boxes.push_back({box.required("min").point(), box.required("max").point()});
    }
    for (const auto& item : f["knows"].texts()) a.known_info.insert(item);
    const Field reqs = f["requires"];
    for (std::size_t k = 0; k < reqs.size(); ++k) {
      const Field r = reqs.at(k);
      r.only({"action", "at", "info"});
      const auto items = r.required("info").texts();
      cfg.info_reqs.require(a.id, action_kind(r.required("action")), r.required("at").id(),
                            std::set<std::string>(items.begin(), items.end()));
    }
    cfg.agents.push_back(std::move(a));
  }
}

void read_parts(const Field& list, ScenarioConfig& cfg) {
  for (std::size_t i = 0; i < list.size(); ++i) {
    const Field f = list.at(i);
    f.only({"id", "weight", "at"});
    PartSpec p;
    p.id = f.required("id").id();
    p.weight_kg = f.required("weight").number(Unit::Mass);
    if (!(p.weight_kg > 0.0)) f["weight"].fail("must be positive");
    if (f["at"].present()) p.initial_location = f["at"].id();
    cfg.parts.push_back(std::move(p));
  }
}

void read_locations(const Field& list, ScenarioConfig& cfg) {
  for (std::size_t i = 0; i < list.size(); ++i) {
    const Field f = list.at(i);
    f.only({"id", "position", "reach"});
    LocationSpec l;
    l.id = f.required("id").id();
    l.position = f.required("position").point();
    for (const auto& [robot, value] : f["reach"].entries()) {
      const double d = value.number();
      if (!(d >= 0.0 && d <= 100.0)) value.fail("must be within [0, 100]");
      l.reach_index.push_back({lower(robot), d});
    }
    cfg.locations.push_back(std::move(l));
  }
}

void read_paths(const Field& list, ScenarioConfig& cfg) {
  for (std::size_t i = 0; i < list.size(); ++i) {
    const Field f = list.at(i);
    f.only({"id", "from", "to", "via"});
    PathSpec p;
    p.id = f.required("id").id();
    p.from = f.required("from").id();
    p.to = f.required("to").id();
    const auto* from = cfg.find_location(p.from);
    const auto* to = cfg.find_location(p.to);
    if (!from) f["from"].fail("unknown location '" + p.from + "'");
    if (!to) f["to"].fail("unknown location '" + p.to + "'");
    std::vector<Point3> w{from->position};
    const Field via = f["via"];
    for (std::size_t k = 0; k < via.size(); ++k) w.push_back(via.at(k).point());
    w.push_back(to->position);
    try {
      p.trajectory = Trajectory(std::move(w));
    } catch (const Error& e) {
      f.fail(e.what());
    }
    cfg.paths.push_back(std::move(p));
  }
}

void read_gains(const Field& f, ScenarioConfig& cfg) {
  if (!f.present()) return;
  f.only({"c_k", "k_c", "c_h", "c_r", "double_count_ci"});
  for (const auto& [kind_text, actions] : f["c_k"].entries()) {
    const auto kind = parse_agent_kind(lower(kind_text));
    if (!kind) actions.fail("unknown agent kind '" + kind_text + "'");
    for (const auto& [action_text, value] : actions.entries()) {
      const auto action = parse_action_kind(action_text);
      if (!action) value.fail("unknown action '" + action_text + "'");
      cfg.gains.c_k[{*kind, *action}] = value.number();
    }
  }
  if (f["k_c"].present()) cfg.gains.k_c = f["k_c"].number();
  if (f["c_h"].present()) cfg.gains.c_h = f["c_h"].number();
  if (f["c_r"].present()) cfg.gains.c_r = f["c_r"].number();
  if (f["double_count_ci"].present()) cfg.gains.double_count_ci = f["double_count_ci"].boolean();
}

void read_durations(const Field& f, ScenarioConfig& cfg) {
  if (!f.present()) return;
  f.only({"pick", "place", "move", "cooperate", "assemble"});
  auto& d = cfg.durations;
  for (auto [key, slot] : {std::pair{"pick", &d.pick}, std::pair{"place", &d.place}, std::pair{"move", &d.move},
                           std::pair{"cooperate", &d.cooperate}, std::pair{"assemble", &d.assemble}}) {
    if (f[key].present()) *slot = f[key].number(Unit::Time);
  }
}

void read_reach_models(const Field& list, ScenarioConfig& cfg) {
  for (std::size_t i = 0; i < list.size(); ++i) {
    const Field f = list.at(i);
    f.only({"robot", "oracle", "link1", "link2", "max_tilt", "samples", "seed", "radius"});
    const std::string oracle = f.required("oracle").id();
    if (oracle != "planar2") f["oracle"].fail("unknown oracle '" + oracle + "'");
    ReachModel m;
    m.robot = f.required("robot").id();
    m.link1_m = f.required("link1").number(Unit::Length);
    m.link2_m = f.required("link2").number(Unit::Length);
    m.max_tilt_rad = f.required("max_tilt").number();
    if (f["samples"].present()) {
      const double n = f["samples"].number();
      if (!(n >= 1.0) || n != std::floor(n)) f["samples"].fail("must be a positive integer");
      m.samples = static_cast<std::size_t>(n);
    }
    if (f["seed"].present()) {
      const double s = f["seed"].number();
      if (!(s >= 0.0) || s != std::floor(s)) f["seed"].fail("must be a non-negative integer");
      m.seed = static_cast<std::uint64_t>(s);
    }
    if (f["radius"].present()) m.radius_m = f["radius"].number(Unit::Length);
    cfg.reach_models.push_back(std::move(m));
  }
}

}  // namespace

ScenarioConfig parse_scenario(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ScenarioError("", std::to_string(e.mark.line + 1) + ":" + std::to_string(e.mark.column + 1) + ": " + e.msg);
  }
  const Field doc(root, "");
  if (!root.IsMap()) doc.fail("a scenario document is a mapping");
  doc.only({"name", "agents", "parts", "locations", "paths", "gains", "safety_d", "durations", "goal", "assemble",
            "reach_models"});

  ScenarioConfig cfg;
  try {
    if (doc["name"].present()) cfg.name = doc["name"].id();
    // Locations first: paths resolve their endpoints against them.
    read_locations(doc["locations"], cfg);
    read_agents(doc["agents"], cfg);
    read_parts(doc["parts"], cfg);
    read_paths(doc["paths"], cfg);
    read_gains(doc["gains"], cfg);
    for (const auto& [key, value] : doc["safety_d"].entries()) cfg.safety_d[lower(key)] = value.number();
    read_durations(doc["durations"], cfg);
    const Field goal = doc["goal"];
    for (std::size_t i = 0; i < goal.size(); ++i) cfg.goal.push_back(goal_atom(goal.at(i)));
    const Field rules = doc["assemble"];
    for (std::size_t i = 0; i < rules.size(); ++i) {
      const Field r = rules.at(i);
      r.only({"inputs", "output", "at"});
      cfg.assemble.push_back({r.required("inputs").ids(), r.required("output").id(), r.required("at").id()});
    }
    read_reach_models(doc["reach_models"], cfg);
  } catch (const YAML::Exception& e) {
    throw ScenarioError("", std::to_string(e.mark.line + 1) + ":" + std::to_string(e.mark.column + 1) + ": " + e.msg);
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error("cannot open scenario file '" + file.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

}  // namespace hrcplan
