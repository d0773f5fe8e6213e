#include "cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "hrcplan/capability.hpp"
#include "hrcplan/error.hpp"
#include "hrcplan/pddl/parse.hpp"
#include "hrcplan/pddl/plan.hpp"
#include "hrcplan/planner/lift.hpp"
#include "hrcplan/planner/search.hpp"
#include "hrcplan/planner/validate.hpp"
#include "hrcplan/scenario.hpp"

namespace hrcplan::cli {

namespace {

/// Bad input: exit code 2.
struct InputError : Error {
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << content;
  if (!out) throw InputError("cannot write '" + path + "'");
}

/// A file path, or `builtin:1` / `builtin:2` for the reference assembly cell.
ScenarioConfig scenario_from(const std::string& source) {
  if (source == "builtin:1") return builtin_benchmark(1);
  if (source == "builtin:2") return builtin_benchmark(2);
  return load_scenario(source);
}

std::vector<double> numbers(const std::string& text, std::size_t count, const char* what) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError(std::string(what) + ": '" + item + "' is not a number");
    }
  }
  if (v.size() != count) throw InputError(std::string(what) + ": expected " + std::to_string(count) + " numbers");
  return v;
}

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

struct Solved {
  CompiledProblem compiled;
  planner::SearchResult search;
  pddl::TimedPlan timed;
};

Solved solve(const ScenarioConfig& cfg, std::size_t budget) {
  Solved s;
  s.compiled = compile(cfg);
  planner::SearchOptions options;
  options.max_expansions = budget;
  s.search = planner::plan_search(s.compiled.grounded, options);
  if (s.search.solved) s.timed = planner::make_timed_plan(s.compiled.grounded, s.search.plan);
  return s;
}

int report_plan(const Solved& s, const std::string& out_path, std::ostream& out, std::ostream& err) {
  if (!s.search.solved) {
    err << "no plan: the goal is unreachable\n";
    return 1;
  }
  const std::string text = pddl::emit_plan(s.timed);
  if (out_path.empty())
    out << text;
  else
    write_file(out_path, text);
  err << "; steps " << s.timed.steps.size() << ", total cost " << fixed3(s.timed.total_cost.value()) << ", makespan "
      << fixed3(s.timed.makespan) << " s, expanded " << s.search.expanded << "\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Task-allocation-aware planning for human-robot cells", "hrcplan"};
  app.require_subcommand(1);

  std::string scenario;
  std::string format = "csv";
  auto* cost_table = app.add_subcommand("cost-table", "Per-agent action costs");
  cost_table->add_option("scenario", scenario, "Scenario file or builtin:1|builtin:2")->required();
  cost_table->add_option("--format", format, "csv, json or matrix")->check(CLI::IsMember({"csv", "json", "matrix"}));

  std::string oracle = "planar2", bounds, out_path, map_format = "csv", base = "0,0,0", robot = "robot";
  double cell = 0.0, link1 = 0.4, link2 = 0.3, max_tilt = std::numbers::pi / 2;
  std::size_t samples = 200;
  std::uint64_t seed = 0;
  auto* cap = app.add_subcommand("capability-map", "Reachability index over a grid");
  cap->add_option("--oracle", oracle, "Reachability oracle")->check(CLI::IsMember({"planar2"}));
  cap->add_option("--bounds", bounds, "xmin,ymin,zmin,xmax,ymax,zmax in meters")->required();
  cap->add_option("--cell", cell, "Cell edge in meters")->required();
  cap->add_option("--samples", samples, "Directions per cell")->check(CLI::PositiveNumber);
  cap->add_option("--seed", seed, "Sampling seed");
  cap->add_option("--out", out_path, "Output file (stdout if omitted)");
  cap->add_option("--format", map_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cap->add_option("--link1", link1, "First link length in meters");
  cap->add_option("--link2", link2, "Second link length in meters");
  cap->add_option("--max-tilt", max_tilt, "Approach cone half-angle in radians");
  cap->add_option("--base", base, "Arm base x,y,z in meters");
  cap->add_option("--robot", robot, "Robot id recorded in the map");

  std::string out_domain, out_problem;
  auto* comp = app.add_subcommand("compile", "Emit the PDDL domain and problem");
  comp->add_option("scenario", scenario, "Scenario file or builtin:1|builtin:2")->required();
  comp->add_option("--out-domain", out_domain, "Domain file");
  comp->add_option("--out-problem", out_problem, "Problem file");

  std::size_t budget = planner::SearchOptions{}.max_expansions;
  auto* plan = app.add_subcommand("plan", "Cost-optimal timed plan");
  plan->add_option("scenario", scenario, "Scenario file or builtin:1|builtin:2")->required();
  plan->add_option("--budget", budget, "Node expansion budget")->check(CLI::PositiveNumber);
  plan->add_option("--out", out_path, "Plan file (stdout if omitted)");

  std::string plan_file;
  auto* val = app.add_subcommand("validate", "Check a timed plan");
  val->add_option("scenario", scenario, "Scenario file or builtin:1|builtin:2")->required();
  val->add_option("plan", plan_file, "Plan file")->required();

  int cycles = 1;
  auto* demo = app.add_subcommand("demo", "Plan the built-in assembly cell");
  demo->add_option("--cycles", cycles, "Assembly cycles")->check(CLI::IsMember({1, 2}));
  demo->add_option("--budget", budget, "Node expansion budget")->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (cost_table->parsed()) {
      const auto table = build_cost_table(scenario_from(scenario));
      out << (format == "json" ? table.to_json() : format == "matrix" ? table.to_matrix() : table.to_csv());
      return 0;
    }
    if (cap->parsed()) {
      const auto b = numbers(bounds, 6, "--bounds");
      const auto p = numbers(base, 3, "--base");
      if (!(link1 > 0.0) || !(link2 > 0.0)) throw InputError("link lengths must be positive");
      if (!(max_tilt >= 0.0 && max_tilt <= std::numbers::pi)) throw InputError("--max-tilt must be within [0, pi]");
      Region region;
      region.boxes.push_back({{b[0], b[1], b[2]}, {b[3], b[4], b[5]}});
      try {
        validate(region.boxes.front());
      } catch (const Error& e) {
        throw InputError(std::string("--bounds: ") + e.what());
      }
      if (!(cell > 0.0)) throw InputError("--cell must be positive");
      PlanarTwoLinkArm arm({p[0], p[1], p[2]}, link1, link2, max_tilt);
      CapabilityOptions options;
      options.samples = samples;
      options.seed = seed;
      const auto map = build_capability_map(arm, region, cell, options, robot);
      const std::string text = export_map(map, parse_map_format(map_format));
      if (out_path.empty())
        out << text;
      else
        write_file(out_path, text);
      err << "; " << map.dims.nx << "x" << map.dims.ny << "x" << map.dims.nz << " cells\n";
      return 0;
    }
    if (comp->parsed()) {
      const auto compiled = compile(scenario_from(scenario));
      const std::string domain = pddl::emit_domain(compiled.domain);
      const std::string problem = pddl::emit_problem(compiled.problem);
      if (out_domain.empty())
        out << domain;
      else
        write_file(out_domain, domain);
      if (out_problem.empty())
        out << (out_domain.empty() ? "\n" : "") << problem;
      else
        write_file(out_problem, problem);
      err << "; " << compiled.grounded.propositions.size() << " propositions, " << compiled.grounded.ops.size()
          << " grounded actions\n";
      return 0;
    }
    if (plan->parsed()) return report_plan(solve(scenario_from(scenario), budget), out_path, out, err);
    if (demo->parsed()) return report_plan(solve(builtin_benchmark(cycles), budget), "", out, err);
    if (val->parsed()) {
      const auto compiled = compile(scenario_from(scenario));
      const auto timed = pddl::parse_plan(read_file(plan_file));
      const auto report = planner::validate_plan(compiled.grounded, timed);
      out << report.to_json() << "\n";
      return report.ok() ? 0 : 1;
    }
  } catch (const planner::BudgetExhausted& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace hrcplan::cli
