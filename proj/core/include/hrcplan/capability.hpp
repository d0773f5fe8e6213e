#pragma once

// Reachability index over a discretized workspace. Each cell is a sphere; points are
// sampled uniformly on its surface and the oracle is asked whether the manipulator can
// reach each point when approaching along the inward normal. D = 100 * accepted / sampled.

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "hrcplan/model.hpp"

namespace hrcplan {

/// Answers whether a manipulator can reach `target` with its tool pointing along
/// `approach` (unit vector). Implementations must be deterministic and side-effect free.
class ReachabilityOracle {
 public:
  virtual ~ReachabilityOracle() = default;
  virtual bool reachable(const Point3& target, const Point3& approach) const = 0;
};

/// Reference oracle: a two-link arm moving in the horizontal plane through its base,
/// mounted on a vertical axis, so the target's z coordinate is ignored. The tool points
/// along the second link; an approach is accepted if it lies within `max_tilt_rad` of
/// the tool axis for either elbow solution.
class PlanarTwoLinkArm : public ReachabilityOracle {
 public:
  PlanarTwoLinkArm(Point3 base, double link1_m, double link2_m, double max_tilt_rad = std::numbers::pi / 2);

  bool reachable(const Point3& target, const Point3& approach) const override;

  const Point3& base() const { return base_; }
  double link1() const { return link1_; }
  double link2() const { return link2_; }
  double max_tilt() const { return max_tilt_; }
  double max_reach() const { return link1_ + link2_; }
  double min_reach() const;

 private:
  Point3 base_;
  double link1_;
  double link2_;
  double max_tilt_;
  double cos_max_tilt_;
};

/// `n` unit vectors, uniform on the sphere (inverse CDF on z, uniform azimuth).
/// Bitwise reproducible for a fixed seed on every platform.
std::vector<Point3> sample_sphere_directions(std::size_t n, std::uint64_t seed);

/// D in [0, 100] for the sphere of radius `radius_m` around `center`.
double reachability_index(const ReachabilityOracle& oracle, const Point3& center, std::size_t n, std::uint64_t seed,
                          double radius_m);

enum class RegionClass { MostSuitable, Suitable, Unsuitable };

std::string_view to_string(RegionClass c);

/// MostSuitable for d > 60, Suitable for 20 < d <= 60, Unsuitable for d <= 20.
RegionClass classify_region(double d);

struct GridDims {
  std::size_t nx = 1;
  std::size_t ny = 1;
  std::size_t nz = 1;

  std::size_t count() const { return nx * ny * nz; }
  friend bool operator==(const GridDims&, const GridDims&) = default;
};

struct CapabilityMap {
  std::string robot_id;
  /// Minimum corner of the grid.
  Point3 origin;
  /// Cell edge, equal to the sphere diameter.
  double cell_m = 0.0;
  GridDims dims;
  /// x fastest, then y, then z.
  std::vector<double> index;
  std::size_t n_samples = 0;

  std::size_t flat(std::size_t ix, std::size_t iy, std::size_t iz) const { return (iz * dims.ny + iy) * dims.nx + ix; }
  Point3 cell_center(std::size_t flat_index) const;

  friend bool operator==(const CapabilityMap&, const CapabilityMap&) = default;
};

struct CapabilityOptions {
  std::size_t samples = 200;
  std::uint64_t seed = 0;
  std::size_t max_cells = 10'000'000;
};

/// Per-cell seed: splitmix64(seed ^ cell index). Makes each cell independent of
/// evaluation order.
std::uint64_t cell_seed(std::uint64_t seed, std::size_t flat_index);

/// Grid over the bounding box of `bounds`; every cell's D is evaluated at its center.
CapabilityMap build_capability_map(const ReachabilityOracle& oracle, const Region& bounds, double cell_m,
                                   const CapabilityOptions& options, std::string robot_id = {});

/// D of the cell containing `p`. Points on a shared face resolve to the lower-index cell.
double lookup_index(const CapabilityMap& map, const Point3& p);

enum class MapFormat { Csv, Json };

MapFormat parse_map_format(std::string_view text);
std::string export_map(const CapabilityMap& map, MapFormat format);
CapabilityMap import_map(std::string_view text, MapFormat format);

}  // namespace hrcplan
