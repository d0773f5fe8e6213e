#include "hrcplan/ext_cost.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include "hrcplan/error.hpp"

namespace hrcplan {

ExtCost::ExtCost(double value) : value_(value) {
  if (std::isnan(value)) throw Error("cost is NaN");
  if (value < 0.0) throw Error("cost is negative");
}

ExtCost operator*(double factor, ExtCost c) {
  if (!(factor >= 0.0) || std::isinf(factor)) throw Error("cost factor must be finite and non-negative");
  if (c.is_infinite()) return ExtCost::infinity();
  return ExtCost(factor * c.value());
}

std::string ExtCost::to_string() const {
  if (is_infinite()) return "inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value_);
  return std::string(buf, res.ptr);
}

std::ostream& operator<<(std::ostream& os, ExtCost c) { return os << c.to_string(); }

}  // namespace hrcplan
