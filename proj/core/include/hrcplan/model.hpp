#pragma once

// Domain vocabulary of a collaborative cell: agents, parts, locations, paths, the
// box regions that describe a manipulator's range, and the geometric predicates the
// cost model needs. Units are fixed: meters, kilograms, seconds.

#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hrcplan {

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Point3&, const Point3&) = default;
};

Point3 operator+(const Point3& a, const Point3& b);
Point3 operator-(const Point3& a, const Point3& b);
Point3 operator*(double s, const Point3& p);
double dot(const Point3& a, const Point3& b);
double norm(const Point3& p);
double distance(const Point3& a, const Point3& b);
bool is_finite(const Point3& p);

/// Closed axis-aligned box, min <= max componentwise.
struct Box {
  Point3 min;
  Point3 max;

  friend bool operator==(const Box&, const Box&) = default;
};

/// Closed union of boxes. An empty box list is the empty region.
struct Region {
  std::vector<Box> boxes;

  bool empty() const { return boxes.empty(); }
  friend bool operator==(const Region&, const Region&) = default;
};

/// Throws if a coordinate is not finite or min > max on some axis.
void validate(const Box& box);

/// Polyline with at least two waypoints, consecutive waypoints distinct.
class Trajectory {
 public:
  /// Throws hrcplan::Error when the invariants do not hold.
  explicit Trajectory(std::vector<Point3> waypoints);

  const std::vector<Point3>& waypoints() const { return waypoints_; }
  Trajectory reversed() const;

  friend bool operator==(const Trajectory&, const Trajectory&) = default;

 private:
  std::vector<Point3> waypoints_;
};

bool box_contains(const Box& box, const Point3& p);
bool region_contains(const Region& region, const Point3& p);

/// Exact clipping of the closed segment [a, b] against a closed box (slab method).
bool segment_intersects_box(const Point3& a, const Point3& b, const Box& box);

/// True iff some segment of the polyline meets the closed region.
bool trajectory_intersects(const Trajectory& t, const Region& r);

enum class AgentKind { Human, Robot };

std::string_view to_string(AgentKind kind);
std::optional<AgentKind> parse_agent_kind(std::string_view text);

enum class ActionKind { Pick, Place, Move, Cooperate };

inline constexpr ActionKind kAllActionKinds[] = {ActionKind::Pick, ActionKind::Place, ActionKind::Move,
                                                 ActionKind::Cooperate};

/// Upper-case name as used in cost tables: PICK, PLACE, MOVE, COOPERATE.
std::string_view to_string(ActionKind kind);
/// Case-insensitive.
std::optional<ActionKind> parse_action_kind(std::string_view text);

struct AgentSpec {
  std::string id;
  AgentKind kind = AgentKind::Human;
  /// Worker lifting limit or manipulator payload.
  double strength_limit_kg = 0.0;
  /// Manipulator range. Ignored for humans, whose range is unbounded.
  Region range;
  /// Information items the agent already holds, e.g. `coord(base_1)`.
  std::set<std::string> known_info;
  /// Robot base, or the worker's station point.
  Point3 base;
  /// Location where the agent's end-effector (or the worker) starts.
  std::string start;

  bool is_human() const { return kind == AgentKind::Human; }
  bool is_robot() const { return kind == AgentKind::Robot; }
  friend bool operator==(const AgentSpec&, const AgentSpec&) = default;
};

struct PartSpec {
  std::string id;
  double weight_kg = 0.0;
  /// Empty for parts that only come into existence through assembly.
  std::string initial_location;

  friend bool operator==(const PartSpec&, const PartSpec&) = default;
};

struct ReachOverride {
  std::string robot;
  double index = 0.0;

  friend bool operator==(const ReachOverride&, const ReachOverride&) = default;
};

struct LocationSpec {
  std::string id;
  Point3 position;
  /// Explicit reachability indices D in [0, 100]; these bypass any capability model.
  std::vector<ReachOverride> reach_index;

  std::optional<double> reach_for(std::string_view robot) const;
  friend bool operator==(const LocationSpec&, const LocationSpec&) = default;
};

struct PathSpec {
  std::string id;
  std::string from;
  std::string to;
  Trajectory trajectory{{Point3{0, 0, 0}, Point3{1, 0, 0}}};

  friend bool operator==(const PathSpec&, const PathSpec&) = default;
};

/// One (agents, action, parameters) combination the cost model is asked about.
/// `at` names a location for PICK/PLACE/COOPERATE and a path for MOVE.
struct GroundAction {
  ActionKind kind = ActionKind::Pick;
  std::vector<std::string> agents;
  std::optional<std::string> part;
  std::string at;
  double duration_s = 1.0;

  /// Throws hrcplan::Error if the agent count or duration is inconsistent with `kind`.
  void validate() const;
  friend bool operator==(const GroundAction&, const GroundAction&) = default;
};

}  // namespace hrcplan
