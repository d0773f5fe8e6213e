#include "hrcplan/capability.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hrcplan/error.hpp"

namespace hrcplan {

PlanarTwoLinkArm::PlanarTwoLinkArm(Point3 base, double link1_m, double link2_m, double max_tilt_rad)
    : base_(base), link1_(link1_m), link2_(link2_m), max_tilt_(max_tilt_rad), cos_max_tilt_(std::cos(max_tilt_rad)) {
  if (!(link1_m > 0.0) || !(link2_m > 0.0)) throw Error("link lengths must be positive");
  if (!(max_tilt_rad >= 0.0) || max_tilt_rad > std::numbers::pi) throw Error("max tilt must lie in [0, pi]");
  if (!is_finite(base)) throw Error("arm base is not finite");
}

double PlanarTwoLinkArm::min_reach() const { return std::abs(link1_ - link2_); }

bool PlanarTwoLinkArm::reachable(const Point3& target, const Point3& approach) const {
  const double dx = target.x - base_.x;
  const double dy = target.y - base_.y;
  const double r2 = dx * dx + dy * dy;
  const double r = std::sqrt(r2);
  if (r > max_reach() || r < min_reach()) return false;

  double c2 = (r2 - link1_ * link1_ - link2_ * link2_) / (2.0 * link1_ * link2_);
  c2 = std::clamp(c2, -1.0, 1.0);
  const double q2 = std::acos(c2);
  const double bearing = std::atan2(dy, dx);
  for (double elbow : {q2, -q2}) {
    const double q1 = bearing - std::atan2(link2_ * std::sin(elbow), link1_ + link2_ * std::cos(elbow));
    const double tool = q1 + elbow;
    // Tool axis lies in the horizontal plane.
    const double c = std::cos(tool) * approach.x + std::sin(tool) * approach.y;
    if (c >= cos_max_tilt_) return true;
  }
  return false;
}

namespace {

double unit_interval(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::vector<Point3> sample_sphere_directions(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw Error("empty sample");
  std::mt19937_64 gen(seed);
  std::vector<Point3> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = 1.0 - 2.0 * unit_interval(gen);
    const double phi = 2.0 * std::numbers::pi * unit_interval(gen);
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    out.push_back({rho * std::cos(phi), rho * std::sin(phi), z});
  }
  return out;
}

double reachability_index(const ReachabilityOracle& oracle, const Point3& center, std::size_t n, std::uint64_t seed,
                          double radius_m) {
  if (!(radius_m >= 0.0)) throw Error("sphere radius must be non-negative");
  const auto dirs = sample_sphere_directions(n, seed);
  std::size_t accepted = 0;
  for (const Point3& v : dirs) {
    if (oracle.reachable(center + radius_m * v, -1.0 * v)) ++accepted;
  }
  return static_cast<double>(accepted) / static_cast<double>(n) * 100.0;
}

std::string_view to_string(RegionClass c) {
  switch (c) {
    case RegionClass::MostSuitable:
      return "MostSuitable";
    case RegionClass::Suitable:
      return "Suitable";
    case RegionClass::Unsuitable:
      return "Unsuitable";
  }
  return "?";
}

RegionClass classify_region(double d) {
  if (!(d >= 0.0 && d <= 100.0)) throw Error("index out of range");
  if (d > 60.0) return RegionClass::MostSuitable;
  if (d > 20.0) return RegionClass::Suitable;
  return RegionClass::Unsuitable;
}

Point3 CapabilityMap::cell_center(std::size_t flat_index) const {
  const std::size_t ix = flat_index % dims.nx;
  const std::size_t iy = (flat_index / dims.nx) % dims.ny;
  const std::size_t iz = flat_index / (dims.nx * dims.ny);
  return {origin.x + (static_cast<double>(ix) + 0.5) * cell_m, origin.y + (static_cast<double>(iy) + 0.5) * cell_m,
          origin.z + (static_cast<double>(iz) + 0.5) * cell_m};
}

std::uint64_t cell_seed(std::uint64_t seed, std::size_t flat_index) {
  std::uint64_t z = seed ^ static_cast<std::uint64_t>(flat_index);
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

CapabilityMap build_capability_map(const ReachabilityOracle& oracle, const Region& bounds, double cell_m,
                                   const CapabilityOptions& options, std::string robot_id) {
  if (!(cell_m > 0.0) || !std::isfinite(cell_m)) throw Error("cell size must be positive");
  if (bounds.empty()) throw Error("bounds are empty");
  if (options.samples == 0) throw Error("empty sample");
  for (const Box& b : bounds.boxes) validate(b);

  Point3 lo = bounds.boxes.front().min;
  Point3 hi = bounds.boxes.front().max;
  for (const Box& b : bounds.boxes) {
    lo = {std::min(lo.x, b.min.x), std::min(lo.y, b.min.y), std::min(lo.z, b.min.z)};
    hi = {std::max(hi.x, b.max.x), std::max(hi.y, b.max.y), std::max(hi.z, b.max.z)};
  }
  auto cells_along = [&](double extent) -> double { return std::max(1.0, std::ceil(extent / cell_m - 1e-9)); };
  const double nx = cells_along(hi.x - lo.x);
  const double ny = cells_along(hi.y - lo.y);
  const double nz = cells_along(hi.z - lo.z);
  if (nx * ny * nz > static_cast<double>(options.max_cells)) throw Error("grid too large");

  CapabilityMap map;
  map.robot_id = std::move(robot_id);
  map.origin = lo;
  map.cell_m = cell_m;
  map.dims = {static_cast<std::size_t>(nx), static_cast<std::size_t>(ny), static_cast<std::size_t>(nz)};
  map.n_samples = options.samples;
  map.index.resize(map.dims.count());
  for (std::size_t i = 0; i < map.index.size(); ++i) {
    map.index[i] =
        reachability_index(oracle, map.cell_center(i), options.samples, cell_seed(options.seed, i), cell_m / 2.0);
  }
  return map;
}

double lookup_index(const CapabilityMap& map, const Point3& p) {
  auto axis_index = [&](double coord, double origin, std::size_t n) -> std::size_t {
    const double t = (coord - origin) / map.cell_m;
    if (!(t >= 0.0) || t > static_cast<double>(n)) throw Error("out of map");
    const double fl = std::floor(t);
    // A point on a face shared by two cells belongs to the lower-index one.
    std::size_t i = static_cast<std::size_t>(fl);
    if (fl == t && i > 0) --i;
    return std::min(i, n - 1);
  };
  const std::size_t ix = axis_index(p.x, map.origin.x, map.dims.nx);
  const std::size_t iy = axis_index(p.y, map.origin.y, map.dims.ny);
  const std::size_t iz = axis_index(p.z, map.origin.z, map.dims.nz);
  return map.index.at(map.flat(ix, iy, iz));
}

MapFormat parse_map_format(std::string_view text) {
  if (text == "csv") return MapFormat::Csv;
  if (text == "json") return MapFormat::Json;
  throw Error("unsupported map format '" + std::string(text) + "'");
}

std::string export_map(const CapabilityMap& map, MapFormat format) {
  if (format == MapFormat::Json) {
    nlohmann::ordered_json j;
    j["robot_id"] = map.robot_id;
    j["origin"] = {map.origin.x, map.origin.y, map.origin.z};
    j["cell_m"] = map.cell_m;
    j["dims"] = {map.dims.nx, map.dims.ny, map.dims.nz};
    j["n_samples"] = map.n_samples;
    j["index"] = map.index;
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "# robot=" << map.robot_id << " origin=" << fmt_double(map.origin.x) << ',' << fmt_double(map.origin.y) << ','
     << fmt_double(map.origin.z) << " cell=" << fmt_double(map.cell_m) << " dims=" << map.dims.nx << ',' << map.dims.ny
     << ',' << map.dims.nz << " samples=" << map.n_samples << '\n';
  os << "x,y,z,D,class\n";
  for (std::size_t i = 0; i < map.index.size(); ++i) {
    const Point3 c = map.cell_center(i);
    os << fmt_double(c.x) << ',' << fmt_double(c.y) << ',' << fmt_double(c.z) << ',' << fmt_double(map.index[i]) << ','
       << to_string(classify_region(map.index[i])) << '\n';
  }
  return os.str();
}

namespace {

double parse_number(std::string_view s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw Error("bad number '" + std::string(s) + "'");
  return v;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

CapabilityMap import_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  CapabilityMap map;
  bool have_meta = false;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::istringstream meta(line.substr(1));
      std::string field;
      while (meta >> field) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = field.substr(0, eq);
        const std::string value = field.substr(eq + 1);
        if (key == "robot") {
          map.robot_id = value;
        } else if (key == "origin") {
          auto v = split(value, ',');
          if (v.size() != 3) throw Error("bad origin in map header");
          map.origin = {parse_number(v[0]), parse_number(v[1]), parse_number(v[2])};
        } else if (key == "cell") {
          map.cell_m = parse_number(value);
        } else if (key == "dims") {
          auto v = split(value, ',');
          if (v.size() != 3) throw Error("bad dims in map header");
          map.dims = {static_cast<std::size_t>(parse_number(v[0])), static_cast<std::size_t>(parse_number(v[1])),
                      static_cast<std::size_t>(parse_number(v[2]))};
        } else if (key == "samples") {
          map.n_samples = static_cast<std::size_t>(parse_number(value));
        }
      }
      have_meta = true;
      continue;
    }
    if (!have_header) {
      if (line != "x,y,z,D,class") throw Error("missing map header row");
      have_header = true;
      continue;
    }
    auto cols = split(line, ',');
    if (cols.size() != 5) throw Error("map row needs 5 columns");
    map.index.push_back(parse_number(cols[3]));
  }
  if (!have_meta) throw Error("missing map metadata line");
  if (map.index.size() != map.dims.count()) throw Error("map row count does not match dims");
  return map;
}

}  // namespace

CapabilityMap import_map(std::string_view text, MapFormat format) {
  CapabilityMap map;
  if (format == MapFormat::Csv) {
    map = import_csv(text);
  } else {
    try {
      const auto j = nlohmann::json::parse(text);
      map.robot_id = j.at("robot_id").get<std::string>();
      const auto o = j.at("origin");
      map.origin = {o.at(0).get<double>(), o.at(1).get<double>(), o.at(2).get<double>()};
      map.cell_m = j.at("cell_m").get<double>();
      const auto d = j.at("dims");
      map.dims = {d.at(0).get<std::size_t>(), d.at(1).get<std::size_t>(), d.at(2).get<std::size_t>()};
      map.n_samples = j.at("n_samples").get<std::size_t>();
      map.index = j.at("index").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(std::string("bad map json: ") + e.what());
    }
    if (map.index.size() != map.dims.count()) throw Error("map index size does not match dims");
  }
  if (!(map.cell_m > 0.0)) throw Error("map cell size must be positive");
  for (double d : map.index)
    if (!(d >= 0.0 && d <= 100.0)) throw Error("index out of range");
  return map;
}

}  // namespace hrcplan
