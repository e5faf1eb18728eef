// Command-line front end: instance generation, solving, validation,
// benchmark grids and report tables.
//
// Exit codes: 0 success, 1 usage error, 2 validation/input failure,
// 3 solver error or a timeout that produced no result.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "darp/darp.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;

darp::Seconds minutes_to_seconds(double minutes) {
  if (minutes <= 0) throw darp::ValidationError("duration values must be positive");
  return static_cast<darp::Seconds>(std::llround(minutes * 60.0));
}

struct GenerateArgs {
  std::string graph, speeds, zones, demand, start, out;
  double duration_min = 0, max_delay_min = 0, lookback_min = 0;
  std::uint64_t seed = 0;
  std::uint32_t capacity = 4;
  unsigned jobs = 0;
};

int cmd_generate(const GenerateArgs& a) {
  using namespace darp;

  RoadGraph graph = load_graph(a.graph);
  if (!a.speeds.empty()) {
    const SpeedTable speeds = load_speed_table(a.speeds);
    graph = assign_speeds(graph, speeds);
  }
  graph = contract_passthrough(graph);
  graph = filter_largest_scc(graph);
  const auto matrix =
      std::make_shared<const TravelTimeMatrix>(compute_travel_time_matrix(graph, a.jobs));
  std::cerr << "road network: " << graph.nodes().size() << " nodes after preprocessing\n";

  const auto zones = filter_zones(load_zones(a.zones), *matrix);
  const auto records = load_demand(a.demand);

  const std::int64_t epoch_signed = parse_iso8601(a.start);
  if (epoch_signed < 0) throw ValidationError("start time must not be before 1970");
  const Seconds epoch = static_cast<Seconds>(epoch_signed);
  const Seconds duration = minutes_to_seconds(a.duration_min);
  const Seconds max_delay = minutes_to_seconds(a.max_delay_min);
  const Seconds lookback = minutes_to_seconds(a.lookback_min);

  Rng rng(a.seed);
  DemandGenStats stats;
  std::vector<std::string> warnings;
  std::vector<Request> requests =
      generate_demand(records, zones, *matrix, epoch, epoch + duration, rng, &stats, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  if (requests.empty())
    throw ValidationError("no demand records fall inside the requested window");

  // Vehicle candidate pool: resolved origins of records in the lookback
  // window, drawn in record order from the same rng stream.
  const Seconds window_lo = epoch > lookback ? epoch - lookback : 0;
  std::vector<NodeId> candidates;
  for (const DemandRecord& rec : records) {
    const Seconds t = sample_time(rec.time, rng);
    if (t >= window_lo && t < epoch)
      candidates.push_back(detail::resolve_location(rec.origin, zones, *matrix, rng));
  }
  if (candidates.empty())
    throw ValidationError("no prior demand in the lookback window; vehicle starts "
                          "cannot be sampled");

  const FleetSizing sizing =
      size_fleet(requests, candidates, *matrix, max_delay, a.capacity, rng);
  std::cerr << "fleet sizing: minimal " << sizing.minimal << ", sized " << sizing.sized
            << " (pool " << candidates.size() << ")\n";

  Instance inst;
  inst.config.area = fs::path(a.out).stem().string();
  inst.config.epoch_iso = format_iso8601(epoch);
  inst.config.duration_s = duration;
  inst.config.max_delay_s = max_delay;
  inst.config.seed = a.seed;
  inst.config.matrix_file = fs::path(a.out).stem().string() + ".matrix";
  inst.requests = std::move(requests);
  for (std::uint32_t i = 0; i < sizing.sized; ++i)
    inst.vehicles.push_back({i, sizing.order[i % sizing.order.size()], a.capacity});
  inst.matrix = matrix;
  validate_instance(inst);

  const fs::path out_path(a.out);
  if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
  write_matrix(*matrix, out_path.parent_path() / inst.config.matrix_file);
  write_instance(inst, out_path);
  std::cout << "instance " << a.out << ": " << inst.requests.size() << " requests, "
            << inst.vehicles.size() << " vehicles\n";
  return kExitOk;
}

struct SolveArgs {
  std::string method = "vga", instance, out;
  double time_limit_s = 0;
  std::uint32_t group_cap = 8;
  unsigned threads = 0;
  std::uint64_t seed = 0;  // accepted for interface symmetry; solvers are deterministic
  unsigned jobs = 0;
};

int cmd_solve(const SolveArgs& a) {
  using namespace darp;
  const Instance inst = read_instance(a.instance);

  std::optional<Solution> sol;
  SolveStatus status = SolveStatus::error;
  const auto t0 = std::chrono::steady_clock::now();
  if (a.method == "ih") {
    sol = solve_ih(inst);
    status = SolveStatus::feasible;
  } else if (a.method == "vga") {
    VgaOptions vo;
    vo.group_cap = a.group_cap;
    vo.threads = a.threads ? a.threads : a.jobs;
    vo.time_limit_s = a.time_limit_s;
    const VgaResult vr = solve_vga(inst, vo);
    status = vr.status;
    if (vr.status == SolveStatus::optimal || vr.status == SolveStatus::feasible)
      sol = vr.solution;
    std::cerr << "vga: " << vr.group_count << " candidate groups, cap "
              << (vr.cap_reached ? "reached" : "not reached") << ", "
              << vr.nodes << " nodes\n";
  } else {
    throw CLI::ValidationError("--method", "must be 'ih' or 'vga'");
  }
  const auto wall_ms = static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                            t0)
          .count());

  if (!sol) {
    std::cout << "status " << to_string(status) << "\n";
    return kExitSolver;
  }
  const auto violations = validate_solution(*sol, inst);
  if (!violations.empty())
    throw SolverError("solver output failed validation: " + violations.front().message);

  if (!a.out.empty()) {
    const fs::path out_path(a.out);
    if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
    write_solution(*sol, a.instance, a.method, wall_ms, out_path);
  }
  std::cout << "status " << to_string(status) << "\ntotal_cost_s " << sol->total_cost
            << "\nwall_time_ms " << wall_ms << "\n";
  return kExitOk;
}

struct ValidateArgs {
  std::string instance, solution;
};

int cmd_validate(const ValidateArgs& a) {
  using namespace darp;
  if (!a.solution.empty()) {
    SolutionFile sf;
    Instance inst;
    if (!a.instance.empty()) {
      inst = read_instance(a.instance);
      sf = read_solution(a.solution, inst);
    } else {
      std::tie(sf, inst) = read_solution_with_instance(a.solution);
    }
    const auto violations = validate_solution(sf.solution, inst);
    if (!violations.empty()) {
      for (const auto& v : violations) std::cerr << "violation: " << v.message << "\n";
      std::cout << "invalid (" << violations.size() << " violations)\n";
      return kExitValidation;
    }
    std::cout << "valid: " << sf.solution.routes.size() << " routes, total_cost_s "
              << sf.solution.total_cost << "\n";
    return kExitOk;
  }
  if (!a.instance.empty()) {
    const Instance inst = read_instance(a.instance);  // validates on load
    std::cout << "valid: " << inst.requests.size() << " requests, "
              << inst.vehicles.size() << " vehicles\n";
    return kExitOk;
  }
  throw CLI::ValidationError("validate", "needs --instance and/or --solution");
}

struct BenchArgs {
  std::vector<std::string> instances;
  std::vector<std::string> methods = {"ih", "vga"};
  std::string out = "results.csv";
  std::string solutions_dir;
  std::vector<double> durations, deltas;
  double time_limit_s = 0;
  std::uint32_t group_cap = 8;
  unsigned jobs = 1;
  unsigned threads = 0;
  bool no_grid_filter = false;
};

int cmd_bench(const BenchArgs& a) {
  using namespace darp;
  ExperimentGrid grid;
  if (!a.durations.empty()) grid.durations_min = a.durations;
  if (!a.deltas.empty()) grid.deltas_min = a.deltas;

  BenchConfig cfg;
  cfg.methods = a.methods;
  cfg.time_limit_s = a.time_limit_s;
  cfg.group_cap = a.group_cap;
  cfg.jobs = a.jobs;
  cfg.solver_threads = a.threads;
  if (!a.solutions_dir.empty()) {
    cfg.solutions_dir = a.solutions_dir;
    fs::create_directories(cfg.solutions_dir);
  }

  const bool fresh = !fs::exists(a.out) || fs::file_size(a.out) == 0;
  std::ofstream results(a.out, std::ios::app);
  if (!results) throw IoError("cannot open results file " + a.out);
  if (fresh) results << results_header() << "\n";

  std::vector<fs::path> paths(a.instances.begin(), a.instances.end());
  const auto records =
      run_grid(paths, a.no_grid_filter ? nullptr : &grid, cfg, [&](const RunRecord& r) {
        results << format_record(r) << "\n";
        results.flush();
        std::cerr << format_record(r) << "\n";
      });
  std::cout << records.size() << " runs recorded in " << a.out << "\n";
  return kExitOk;
}

struct ReportArgs {
  std::string kind = "cost-per-request";
  std::string results;
  std::vector<std::string> solutions;
  std::string out;
};

int cmd_report(const ReportArgs& a) {
  using namespace darp;
  std::string table;
  if (a.kind == "ratio" || a.kind == "cost-per-request") {
    if (a.results.empty())
      throw CLI::ValidationError("report", "--results is required for kind " + a.kind);
    const auto records = read_records(a.results);
    table = a.kind == "ratio" ? cost_ratio_table(records) : cost_per_request_table(records);
  } else if (a.kind == "occupancy") {
    if (a.solutions.empty())
      throw CLI::ValidationError("report", "--solutions is required for kind occupancy");
    table = occupancy_report({a.solutions.begin(), a.solutions.end()});
  } else {
    throw CLI::ValidationError("--kind", "must be ratio, cost-per-request or occupancy");
  }
  if (a.out.empty()) {
    std::cout << table;
  } else {
    std::ofstream out(a.out);
    if (!out) throw IoError("cannot write " + a.out);
    out << table;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Large-scale ridesharing DARP toolkit: instance generation, "
               "insertion-heuristic and optimal vehicle-group-assignment solvers, "
               "benchmark harness"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  unsigned jobs = 0;
  double time_limit = 0;
  app.add_option("--seed", seed, "Random seed (default 0)");
  app.add_option("--jobs", jobs, "Worker threads (default: hardware)");
  app.add_option("--time-limit", time_limit, "Solver time limit in seconds (0 = none)");

  GenerateArgs gen;
  auto* cg = app.add_subcommand("generate", "Generate an instance from demand data");
  cg->add_option("--graph", gen.graph, "Road graph file")->required();
  cg->add_option("--speeds", gen.speeds, "Speed table file (optional)");
  cg->add_option("--zones", gen.zones, "Zone definition file")->required();
  cg->add_option("--demand", gen.demand, "Demand record file")->required();
  cg->add_option("--start", gen.start, "Instance start time, ISO-8601 or epoch seconds")
      ->required();
  cg->add_option("--duration", gen.duration_min, "Instance duration in minutes")->required();
  cg->add_option("--max-delay", gen.max_delay_min, "Max delay in minutes")->required();
  cg->add_option("--lookback", gen.lookback_min,
                 "Lookback window in minutes for vehicle starts")
      ->required();
  cg->add_option("--seed", gen.seed, "Random seed");
  cg->add_option("--capacity", gen.capacity, "Vehicle capacity (default 4)");
  cg->add_option("--out", gen.out, "Output instance path")->required();

  SolveArgs sol;
  auto* cs = app.add_subcommand("solve", "Solve an instance");
  cs->add_option("--method", sol.method, "ih or vga")->required();
  cs->add_option("--instance", sol.instance, "Instance file")->required();
  cs->add_option("--time-limit", sol.time_limit_s, "Time limit in seconds (0 = none)");
  cs->add_option("--group-cap", sol.group_cap, "Max requests per group (vga)");
  cs->add_option("--threads", sol.threads, "Solver threads (vga)");
  cs->add_option("--seed", sol.seed, "Accepted for symmetry; solvers are deterministic");
  cs->add_option("--out", sol.out, "Solution output path");

  ValidateArgs val;
  auto* cv = app.add_subcommand("validate", "Validate an instance or solution file");
  cv->add_option("--instance", val.instance, "Instance file");
  cv->add_option("--solution", val.solution, "Solution file");

  BenchArgs ben;
  auto* cb = app.add_subcommand("bench", "Run solver methods over instances");
  cb->add_option("--instances", ben.instances, "Instance files")->required()
      ->expected(-1);
  cb->add_option("--methods", ben.methods, "Methods to run (default: ih vga)");
  cb->add_option("--out", ben.out, "Results CSV (appended)");
  cb->add_option("--solutions-dir", ben.solutions_dir, "Write solution files here");
  cb->add_option("--durations", ben.durations, "Grid filter: durations in minutes");
  cb->add_option("--deltas", ben.deltas, "Grid filter: max delays in minutes");
  cb->add_option("--time-limit", ben.time_limit_s, "Per-run time limit in seconds");
  cb->add_option("--group-cap", ben.group_cap, "Max requests per group (vga)");
  cb->add_option("--jobs", ben.jobs, "Concurrent grid cells");
  cb->add_option("--threads", ben.threads, "Solver threads per cell");
  cb->add_flag("--all", ben.no_grid_filter, "Run every instance, ignore the grid filter");

  ReportArgs rep;
  auto* cr = app.add_subcommand("report", "Derive tables from results/solutions");
  cr->add_option("--kind", rep.kind, "ratio | cost-per-request | occupancy");
  cr->add_option("--results", rep.results, "Results CSV from bench");
  cr->add_option("--solutions", rep.solutions, "Solution files (occupancy)")->expected(-1);
  cr->add_option("--out", rep.out, "Write table here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*cg) {
      if (!cg->count("--seed") && app.count("--seed")) gen.seed = seed;
      gen.jobs = jobs;
      return cmd_generate(gen);
    }
    if (*cs) {
      if (!cs->count("--time-limit") && app.count("--time-limit"))
        sol.time_limit_s = time_limit;
      sol.jobs = jobs;
      return cmd_solve(sol);
    }
    if (*cv) return cmd_validate(val);
    if (*cb) {
      if (!cb->count("--time-limit") && app.count("--time-limit"))
        ben.time_limit_s = time_limit;
      if (!cb->count("--jobs") && app.count("--jobs")) ben.jobs = jobs;
      return cmd_bench(ben);
    }
    if (*cr) return cmd_report(rep);
    return kExitUsage;
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const darp::SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}
