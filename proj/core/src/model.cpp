#include "hrcplan/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "hrcplan/error.hpp"

namespace hrcplan {

Point3 operator+(const Point3& a, const Point3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
Point3 operator-(const Point3& a, const Point3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
Point3 operator*(double s, const Point3& p) { return {s * p.x, s * p.y, s * p.z}; }
double dot(const Point3& a, const Point3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
double norm(const Point3& p) { return std::sqrt(dot(p, p)); }
double distance(const Point3& a, const Point3& b) { return norm(a - b); }

bool is_finite(const Point3& p) { return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z); }

void validate(const Box& box) {
  if (!is_finite(box.min) || !is_finite(box.max)) throw Error("box corner is not finite");
  if (box.min.x > box.max.x || box.min.y > box.max.y || box.min.z > box.max.z)
    throw Error("box min corner exceeds max corner");
}

Trajectory::Trajectory(std::vector<Point3> waypoints) : waypoints_(std::move(waypoints)) {
  if (waypoints_.size() < 2) throw Error("trajectory needs at least two waypoints");
  for (std::size_t i = 0; i < waypoints_.size(); ++i) {
    if (!is_finite(waypoints_[i])) throw Error("trajectory waypoint is not finite");
    if (i > 0 && waypoints_[i] == waypoints_[i - 1]) throw Error("trajectory has repeated consecutive waypoints");
  }
}

Trajectory Trajectory::reversed() const {
  std::vector<Point3> w(waypoints_.rbegin(), waypoints_.rend());
  return Trajectory(std::move(w));
}

bool box_contains(const Box& box, const Point3& p) {
  return p.x >= box.min.x && p.x <= box.max.x && p.y >= box.min.y && p.y <= box.max.y && p.z >= box.min.z &&
         p.z <= box.max.z;
}

bool region_contains(const Region& region, const Point3& p) {
  return std::any_of(region.boxes.begin(), region.boxes.end(), [&](const Box& b) { return box_contains(b, p); });
}

bool segment_intersects_box(const Point3& a, const Point3& b, const Box& box) {
  double t_enter = 0.0;
  double t_exit = 1.0;
  const double origin[3] = {a.x, a.y, a.z};
  const double delta[3] = {b.x - a.x, b.y - a.y, b.z - a.z};
  const double lo[3] = {box.min.x, box.min.y, box.min.z};
  const double hi[3] = {box.max.x, box.max.y, box.max.z};
  for (int axis = 0; axis < 3; ++axis) {
    if (delta[axis] == 0.0) {
      if (origin[axis] < lo[axis] || origin[axis] > hi[axis]) return false;
      continue;
    }
    double t0 = (lo[axis] - origin[axis]) / delta[axis];
    double t1 = (hi[axis] - origin[axis]) / delta[axis];
    if (t0 > t1) std::swap(t0, t1);
    t_enter = std::max(t_enter, t0);
    t_exit = std::min(t_exit, t1);
    if (t_enter > t_exit) return false;
  }
  return true;
}

bool trajectory_intersects(const Trajectory& t, const Region& r) {
  const auto& w = t.waypoints();
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    for (const Box& box : r.boxes) {
      if (segment_intersects_box(w[i], w[i + 1], box)) return true;
    }
  }
  return false;
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

std::string_view to_string(AgentKind kind) { return kind == AgentKind::Human ? "human" : "robot"; }

std::optional<AgentKind> parse_agent_kind(std::string_view text) {
  const std::string s = lower(text);
  if (s == "human") return AgentKind::Human;
  if (s == "robot") return AgentKind::Robot;
  return std::nullopt;
}

std::string_view to_string(ActionKind kind) {
  switch (kind) {
    case ActionKind::Pick:
      return "PICK";
    case ActionKind::Place:
      return "PLACE";
    case ActionKind::Move:
      return "MOVE";
    case ActionKind::Cooperate:
      return "COOPERATE";
  }
  return "?";
}

std::optional<ActionKind> parse_action_kind(std::string_view text) {
  const std::string s = lower(text);
  if (s == "pick") return ActionKind::Pick;
  if (s == "place") return ActionKind::Place;
  if (s == "move") return ActionKind::Move;
  if (s == "cooperate") return ActionKind::Cooperate;
  return std::nullopt;
}

std::optional<double> LocationSpec::reach_for(std::string_view robot) const {
  for (const auto& r : reach_index)
    if (r.robot == robot) return r.index;
  return std::nullopt;
}

void GroundAction::validate() const {
  if (agents.empty()) throw Error("ground action has no agents");
  if (kind == ActionKind::Cooperate && agents.size() < 2) throw Error("COOPERATE needs at least two agents");
  if (kind != ActionKind::Cooperate && agents.size() != 1)
    throw Error(std::string(to_string(kind)) + " takes exactly one agent");
  if (!(duration_s > 0.0)) throw Error("action duration must be positive");
}

}  // namespace hrcplan
