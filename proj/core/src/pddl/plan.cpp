#include "hrcplan/pddl/plan.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "hrcplan/error.hpp"

namespace hrcplan::pddl {

std::string PlanStep::name() const {
  std::string s = action;
  for (const auto& a : args) s += " " + a;
  return s;
}

void TimedPlan::refresh() {
  std::stable_sort(steps.begin(), steps.end(),
                   [](const PlanStep& a, const PlanStep& b) { return a.start_s < b.start_s; });
  makespan = 0.0;
  total_cost = ExtCost::zero();
  for (const auto& s : steps) {
    makespan = std::max(makespan, s.end_s());
    total_cost += s.cost;
  }
}

namespace {

class LineParser {
 public:
  LineParser(std::string_view line, std::size_t line_no) : s_(line), line_(line_no) {}

  PlanStep parse() {
    PlanStep step;
    step.start_s = number("start time");
    skip_space();
    expect(':');
    skip_space();
    expect('(');
    step.action = word();
    if (step.action.empty()) fail("missing action name");
    while (true) {
      skip_space();
      if (peek() == ')') break;
      if (at_end()) fail("missing ')'");
      step.args.push_back(word());
      if (step.args.back().empty()) fail("invalid character");
    }
    ++pos_;
    skip_space();
    if (!at_end()) {
      expect('[');
      skip_space();
      step.duration_s = number("duration");
      skip_space();
      expect(']');
      skip_space();
      if (!at_end()) fail("unexpected text after step");
    }
    if (!(step.duration_s > 0.0)) fail("duration must be positive");
    return step;
  }

 private:
  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return at_end() ? '\0' : s_[pos_]; }
  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, pos_ + 1); }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  double number(const char* what) {
    double v = 0.0;
    const char* first = s_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, s_.data() + s_.size(), v);
    if (ec != std::errc() || ptr == first || !std::isfinite(v) || v < 0.0) fail(std::string("invalid ") + what);
    pos_ += static_cast<std::size_t>(ptr - first);
    return v;
  }

  std::string word() {
    std::string w;
    while (!at_end()) {
      const char c = s_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-') {
        w += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        ++pos_;
      } else {
        break;
      }
    }
    return w;
  }

  std::string_view s_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

}  // namespace

TimedPlan parse_plan(std::string_view text) {
  TimedPlan plan;
  std::size_t line_no = 0;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    std::size_t end = text.find('\n', begin);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(begin, end - begin);
    ++line_no;
    if (auto c = line.find(';'); c != std::string_view::npos) line = line.substr(0, c);
    const bool blank =
        std::all_of(line.begin(), line.end(), [](char ch) { return std::isspace(static_cast<unsigned char>(ch)); });
    if (!blank) {
      std::size_t lead = 0;
      while (std::isspace(static_cast<unsigned char>(line[lead]))) ++lead;
      try {
        plan.steps.push_back(LineParser(line.substr(lead), line_no).parse());
      } catch (const ParseError& e) {
        throw ParseError(e.message(), e.line(), e.column() + lead);
      }
    }
    begin = end + 1;
  }
  plan.refresh();
  return plan;
}

std::string emit_plan(const TimedPlan& plan) {
  std::vector<PlanStep> steps = plan.steps;
  std::stable_sort(steps.begin(), steps.end(),
                   [](const PlanStep& a, const PlanStep& b) { return a.start_s < b.start_s; });
  std::ostringstream os;
  char buf[64];
  for (const auto& s : steps) {
    std::snprintf(buf, sizeof buf, "%.3f", s.start_s);
    os << buf << ": (" << s.name() << ") [";
    std::snprintf(buf, sizeof buf, "%.3f", s.duration_s);
    os << buf << "]\n";
  }
  return os.str();
}

}  // namespace hrcplan::pddl
