#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hrcplan/capability.hpp"
#include "hrcplan/error.hpp"

using namespace hrcplan;

namespace {

struct Always : ReachabilityOracle {
  bool reachable(const Point3&, const Point3&) const override { return true; }
};

struct Never : ReachabilityOracle {
  bool reachable(const Point3&, const Point3&) const override { return false; }
};

/// Accepts approaches from the upper hemisphere only.
struct UpperHalf : ReachabilityOracle {
  bool reachable(const Point3&, const Point3& approach) const override { return approach.z < 0.0; }
};

/// Accepts whatever UpperHalf accepts plus a band of the lower hemisphere.
struct UpperHalfPlus : ReachabilityOracle {
  bool reachable(const Point3& t, const Point3& approach) const override {
    return UpperHalf{}.reachable(t, approach) || approach.x > 0.5;
  }
};

}  // namespace

TEST_CASE("sphere sampling") {
  const auto one = sample_sphere_directions(1, 42);
  REQUIRE(one.size() == 1);
  CHECK(std::abs(norm(one[0]) - 1.0) < 1e-12);

  CHECK(sample_sphere_directions(200, 7) == sample_sphere_directions(200, 7));
  CHECK(sample_sphere_directions(200, 7) != sample_sphere_directions(200, 8));

  const auto many = sample_sphere_directions(100000, 1);
  Point3 mean;
  for (const auto& v : many) {
    mean = mean + v;
    CHECK(std::abs(norm(v) - 1.0) < 1e-12);
  }
  mean = (1.0 / static_cast<double>(many.size())) * mean;
  CHECK(norm(mean) < 0.02);

  CHECK_THROWS_WITH_AS(sample_sphere_directions(0, 1), "empty sample", Error);
}

TEST_CASE("reachability index endpoints and monotonicity") {
  CHECK(reachability_index(Always{}, {}, 500, 3, 0.02) == 100.0);
  CHECK(reachability_index(Never{}, {}, 500, 3, 0.02) == 0.0);
  const double half = reachability_index(UpperHalf{}, {}, 4000, 3, 0.02);
  CHECK(half == doctest::Approx(50.0).epsilon(0.05));
  CHECK(reachability_index(UpperHalfPlus{}, {}, 4000, 3, 0.02) >= half);

  // D is exactly 100 R / N: with N = 3 every value is a multiple of 100/3.
  const double d3 = reachability_index(UpperHalf{}, {}, 3, 9, 0.02);
  const double r = d3 * 3.0 / 100.0;
  CHECK(std::abs(r - std::round(r)) < 1e-12);
}

TEST_CASE("planar arm at the edge of its reach") {
  const PlanarTwoLinkArm arm({0, 0, 0}, 0.4, 0.3, std::numbers::pi / 3);
  const double d = reachability_index(arm, {0.7, 0, 0}, 10000, 5, 0.01);
  CHECK(d <= 50.0);
  CHECK(d > 0.0);

  const PlanarTwoLinkArm wide({0, 0, 0}, 0.4, 0.3, std::numbers::pi);
  CHECK(reachability_index(wide, {0.45, 0, 0}, 2000, 5, 0.02) == 100.0);
  CHECK(reachability_index(wide, {2.0, 0, 0}, 2000, 5, 0.02) == 0.0);
  // Inside the inner hole of the annulus.
  CHECK(reachability_index(wide, {0.0, 0.0, 0.0}, 2000, 5, 0.02) == 0.0);
}

TEST_CASE("index falls off leaving the annulus") {
  const PlanarTwoLinkArm arm({0, 0, 0}, 0.4, 0.3, std::numbers::pi / 2);
  double previous = 100.0;
  for (double x = 0.64; x <= 0.76; x += 0.01) {
    const double coarse = reachability_index(arm, {x, 0, 0}, 2000, 17, 0.02);
    const double dense = reachability_index(arm, {x, 0, 0}, 10000, 17, 0.02);
    CHECK(coarse <= previous + 3.0);
    CHECK(std::abs(coarse - dense) < 4.0);
    previous = coarse;
  }
  CHECK(previous == 0.0);
}

TEST_CASE("region classes") {
  CHECK(classify_region(100) == RegionClass::MostSuitable);
  CHECK(classify_region(60.0001) == RegionClass::MostSuitable);
  CHECK(classify_region(60) == RegionClass::Suitable);
  CHECK(classify_region(20.0001) == RegionClass::Suitable);
  CHECK(classify_region(20) == RegionClass::Unsuitable);
  CHECK(classify_region(0) == RegionClass::Unsuitable);
  CHECK_THROWS_WITH_AS(classify_region(100.5), "index out of range", Error);
  CHECK_THROWS_WITH_AS(classify_region(-1), "index out of range", Error);
  CHECK_THROWS_AS(classify_region(std::nan("")), Error);
}

TEST_CASE("capability map construction") {
  const Region one_cell{{Box{{0, 0, 0}, {0.1, 0.1, 0.1}}}};
  const PlanarTwoLinkArm arm({0, 0, 0}, 0.4, 0.3);
  CapabilityOptions options;
  options.samples = 300;
  options.seed = 4;
  const auto single = build_capability_map(arm, one_cell, 0.1, options, "r");
  REQUIRE(single.index.size() == 1);
  CHECK(single.index[0] == reachability_index(arm, {0.05, 0.05, 0.05}, 300, cell_seed(4, 0), 0.05));

  const Region area{{Box{{-0.8, -0.8, 0}, {0.8, 0.8, 0.1}}}};
  const auto all = build_capability_map(Always{}, area, 0.1, options);
  CHECK(all.dims == GridDims{16, 16, 1});
  for (double d : all.index) CHECK(d == 100.0);

  CHECK(build_capability_map(arm, area, 0.1, options) == build_capability_map(arm, area, 0.1, options));

  options.max_cells = 100;
  CHECK_THROWS_WITH_AS(build_capability_map(arm, area, 0.1, options), "grid too large", Error);
  options.max_cells = 10'000'000;
  CHECK_THROWS_WITH_AS(build_capability_map(arm, area, 1e-5, options), "grid too large", Error);
  CHECK_THROWS_AS(build_capability_map(arm, Region{}, 0.1, options), Error);
  CHECK_THROWS_AS(build_capability_map(arm, area, 0.0, options), Error);
}

TEST_CASE("map lookup") {
  CapabilityMap map;
  map.cell_m = 1.0;
  map.dims = {2, 1, 1};
  map.index = {100.0, 0.0};
  CHECK(lookup_index(map, map.cell_center(0)) == 100.0);
  CHECK(lookup_index(map, map.cell_center(1)) == 0.0);
  CHECK(lookup_index(map, {1.0, 0.5, 0.5}) == 100.0);
  CHECK(lookup_index(map, {2.0, 1.0, 1.0}) == 0.0);
  CHECK(lookup_index(map, {0.0, 0.0, 0.0}) == 100.0);
  CHECK_THROWS_WITH_AS(lookup_index(map, {2.5, 0.5, 0.5}), "out of map", Error);
  CHECK_THROWS_WITH_AS(lookup_index(map, {-0.1, 0.5, 0.5}), "out of map", Error);
}

TEST_CASE("map export and import") {
  CapabilityMap map;
  map.robot_id = "robot1";
  map.origin = {-0.25, 0.5, 0.0};
  map.cell_m = 0.5;
  map.dims = {2, 1, 1};
  map.index = {100.0, 0.0};
  map.n_samples = 7;

  const std::string csv = export_map(map, MapFormat::Csv);
  CHECK(csv.find("MostSuitable") != std::string::npos);
  CHECK(csv.find("Unsuitable") != std::string::npos);
  CHECK(csv.find("MostSuitable") < csv.find("Unsuitable"));
  CHECK(import_map(csv, MapFormat::Csv) == map);
  CHECK(import_map(export_map(map, MapFormat::Json), MapFormat::Json) == map);

  CapabilityMap one = map;
  one.dims = {1, 1, 1};
  one.index = {42.5};
  const std::string one_csv = export_map(one, MapFormat::Csv);
  std::size_t data_rows = 0;
  bool header = false;
  std::size_t start = 0;
  while (start < one_csv.size()) {
    const std::size_t end = one_csv.find('\n', start);
    const std::string line = one_csv.substr(start, end - start);
    if (line == "x,y,z,D,class")
      header = true;
    else if (!line.empty() && line[0] != '#')
      ++data_rows;
    start = end == std::string::npos ? one_csv.size() : end + 1;
  }
  CHECK(header);
  CHECK(data_rows == 1);

  const PlanarTwoLinkArm arm({0.1, 0, 0}, 0.4, 0.3, 1.2);
  CapabilityOptions options;
  options.samples = 64;
  const auto real = build_capability_map(arm, Region{{Box{{-0.7, -0.7, 0}, {0.9, 0.7, 0.2}}}}, 0.1, options, "arm");
  CHECK(import_map(export_map(real, MapFormat::Csv), MapFormat::Csv) == real);
  CHECK(import_map(export_map(real, MapFormat::Json), MapFormat::Json) == real);

  CHECK_THROWS_AS(parse_map_format("xml"), Error);
  CHECK_THROWS_AS(import_map("garbage", MapFormat::Csv), Error);
  CHECK_THROWS_AS(import_map("{", MapFormat::Json), Error);
}
