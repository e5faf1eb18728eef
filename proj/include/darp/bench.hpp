#pragma once

// Benchmark harness: runs solvers over instance sets, records standardized
// result rows, and derives plot-ready tables from them.
//
// Results file: UTF-8 CSV with the fixed header
//   area,duration_min,delta_min,method,requests,vehicles,total_cost_s,
//   cost_per_request_s,wall_time_ms,status
// Cost columns are empty when a run yields no solution. Rows are appended as
// runs finish. All derived tables are sorted and formatted deterministically,
// so re-deriving from the same records is byte-stable.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "darp/insertion.hpp"
#include "darp/instance.hpp"
#include "darp/solution.hpp"
#include "darp/types.hpp"
#include "darp/vga.hpp"

namespace darp {

struct RunRecord {
  std::string area;
  double duration_min = 0.0;
  double delta_min = 0.0;
  std::string method;
  std::uint64_t requests = 0;
  std::uint64_t vehicles = 0;
  std::optional<Seconds> total_cost_s;
  std::optional<double> cost_per_request_s;
  std::uint64_t wall_time_ms = 0;
  SolveStatus status = SolveStatus::error;
};

struct ExperimentGrid {
  std::vector<double> durations_min = {0.5, 1, 2, 5, 15, 30, 120, 960};
  std::vector<double> deltas_min = {3, 5, 10};
  std::uint32_t capacity = 4;
};

namespace detail {

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::string fmt_fixed2(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline bool grid_has(const std::vector<double>& xs, double v) {
  for (double x : xs)
    if (std::fabs(x - v) < 1e-9) return true;
  return false;
}

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace detail

inline const char* results_header() {
  return "area,duration_min,delta_min,method,requests,vehicles,total_cost_s,"
         "cost_per_request_s,wall_time_ms,status";
}

inline std::string format_record(const RunRecord& r) {
  std::ostringstream os;
  os << r.area << ',' << detail::fmt_double(r.duration_min) << ','
     << detail::fmt_double(r.delta_min) << ',' << r.method << ',' << r.requests << ','
     << r.vehicles << ',';
  if (r.total_cost_s) os << *r.total_cost_s;
  os << ',';
  if (r.cost_per_request_s) os << detail::fmt_double(*r.cost_per_request_s);
  os << ',' << r.wall_time_ms << ',' << to_string(r.status);
  return os.str();
}

inline SolveStatus parse_status(const std::string& s) {
  if (s == "optimal") return SolveStatus::optimal;
  if (s == "feasible") return SolveStatus::feasible;
  if (s == "timeout") return SolveStatus::timeout;
  if (s == "error") return SolveStatus::error;
  throw ParseError("unknown status '" + s + "'");
}

inline std::vector<RunRecord> read_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open results file " + path.string());
  std::vector<RunRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (lineno == 1 && line == results_header()) continue;
    const auto f = detail::split_csv(line);
    if (f.size() != 10)
      throw ParseError(path.string() + ":" + std::to_string(lineno) +
                       ": expected 10 columns, got " + std::to_string(f.size()));
    RunRecord r;
    try {
      r.area = f[0];
      r.duration_min = std::stod(f[1]);
      r.delta_min = std::stod(f[2]);
      r.method = f[3];
      r.requests = std::stoull(f[4]);
      r.vehicles = std::stoull(f[5]);
      if (!f[6].empty()) r.total_cost_s = std::stoull(f[6]);
      if (!f[7].empty()) r.cost_per_request_s = std::stod(f[7]);
      r.wall_time_ms = std::stoull(f[8]);
      r.status = parse_status(f[9]);
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
    out.push_back(std::move(r));
  }
  return out;
}

struct BenchConfig {
  std::vector<std::string> methods = {"ih", "vga"};
  double time_limit_s = 0.0;  // per solver run; <= 0 = unlimited
  std::uint32_t group_cap = 8;
  unsigned solver_threads = 0;  // passed to vga; 0 = hardware
  unsigned jobs = 1;            // concurrent grid cells
  std::filesystem::path solutions_dir;  // empty = do not write solution files
};

// Solves one loaded instance with one method. Wall time covers the solve
// only, not instance or matrix loading. Never throws: failures become
// status=error records.
inline RunRecord run_one(const Instance& inst, const std::string& instance_path,
                         const std::string& method, const BenchConfig& cfg) {
  RunRecord rec;
  rec.area = inst.config.area;
  rec.duration_min = static_cast<double>(inst.config.duration_s) / 60.0;
  rec.delta_min = static_cast<double>(inst.config.max_delay_s) / 60.0;
  rec.method = method;
  rec.requests = inst.requests.size();
  rec.vehicles = inst.vehicles.size();

  const auto t0 = std::chrono::steady_clock::now();
  std::optional<Solution> sol;
  try {
    if (method == "ih") {
      sol = solve_ih(inst);
      rec.status = SolveStatus::feasible;
    } else if (method == "vga") {
      VgaOptions vo;
      vo.group_cap = cfg.group_cap;
      vo.threads = cfg.solver_threads;
      vo.time_limit_s = cfg.time_limit_s;
      const VgaResult vr = solve_vga(inst, vo);
      rec.status = vr.status;
      if (vr.status == SolveStatus::optimal || vr.status == SolveStatus::feasible)
        sol = vr.solution;
    } else {
      throw ValidationError("unknown method '" + method + "'");
    }
  } catch (const std::exception&) {
    rec.status = SolveStatus::error;
    sol.reset();
  }
  const auto t1 = std::chrono::steady_clock::now();
  rec.wall_time_ms = static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count());

  if (sol) {
    if (!validate_solution(*sol, inst).empty()) {
      rec.status = SolveStatus::error;
    } else {
      rec.total_cost_s = sol->total_cost;
      if (rec.requests > 0)
        rec.cost_per_request_s =
            static_cast<double>(sol->total_cost) / static_cast<double>(rec.requests);
      if (!cfg.solutions_dir.empty()) {
        const auto stem = std::filesystem::path(instance_path).stem().string();
        // The embedded instance reference must resolve from the solution
        // file's own directory, not from the caller's.
        const auto ref =
            std::filesystem::path(instance_path).lexically_proximate(cfg.solutions_dir);
        try {
          write_solution(*sol, ref.string(), method, rec.wall_time_ms,
                         cfg.solutions_dir / (stem + "." + method + ".sol"));
        } catch (const std::exception&) {
          rec.status = SolveStatus::error;
        }
      }
    }
  }
  return rec;
}

// Runs every (instance, method) cell whose duration and max delay appear in
// the grid. A null grid pointer disables filtering. Failures never abort the
// grid; each finished record is handed to `on_record` under a lock, in
// completion order.
inline std::vector<RunRecord> run_grid(
    const std::vector<std::filesystem::path>& instances, const ExperimentGrid* grid,
    const BenchConfig& cfg, const std::function<void(const RunRecord&)>& on_record = {}) {
  struct Task {
    std::filesystem::path path;
    std::string method;
  };
  std::vector<Task> tasks;
  for (const auto& path : instances)
    for (const auto& method : cfg.methods) tasks.push_back({path, method});

  std::vector<std::optional<RunRecord>> slots(tasks.size());
  std::mutex emit_mutex;

  auto work = [&](std::size_t i) {
    const Task& task = tasks[i];
    RunRecord rec;
    bool keep = true;
    try {
      const Instance inst = read_instance(task.path);
      if (grid) {
        const double dur = static_cast<double>(inst.config.duration_s) / 60.0;
        const double del = static_cast<double>(inst.config.max_delay_s) / 60.0;
        if (!detail::grid_has(grid->durations_min, dur) ||
            !detail::grid_has(grid->deltas_min, del))
          keep = false;
      }
      if (keep) rec = run_one(inst, task.path.string(), task.method, cfg);
    } catch (const std::exception&) {
      rec.area = task.path.string();
      rec.method = task.method;
      rec.status = SolveStatus::error;
    }
    if (!keep) return;
    {
      std::lock_guard<std::mutex> lock(emit_mutex);
      if (on_record) on_record(rec);
    }
    slots[i] = std::move(rec);
  };

  const unsigned jobs = std::max(1u, cfg.jobs);
  if (jobs <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::min<std::size_t>(jobs, tasks.size()); ++t)
      pool.emplace_back([&]() {
        for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1))
          work(i);
      });
    for (std::thread& th : pool) th.join();
  }

  std::vector<RunRecord> out;
  for (auto& s : slots)
    if (s) out.push_back(std::move(*s));
  return out;
}

// 100 * (cost(ih) - cost(vga)) / cost(vga) per (area, duration, delta) cell.
// Cells missing either cost render the missing-value marker "x". CSV sorted
// by (area, duration, delta).
inline std::string cost_ratio_table(const std::vector<RunRecord>& records) {
  using Key = std::tuple<std::string, double, double>;
  std::map<Key, std::pair<std::optional<Seconds>, std::optional<Seconds>>> cells;
  for (const RunRecord& r : records) {
    const Key k{r.area, r.duration_min, r.delta_min};
    auto& cell = cells[k];
    if (r.method == "ih" && r.total_cost_s) cell.first = r.total_cost_s;
    if (r.method == "vga" && r.total_cost_s) cell.second = r.total_cost_s;
  }
  std::ostringstream os;
  os << "area,duration_min,delta_min,ih_over_vga_percent\n";
  for (const auto& [key, cell] : cells) {
    os << std::get<0>(key) << ',' << detail::fmt_double(std::get<1>(key)) << ','
       << detail::fmt_double(std::get<2>(key)) << ',';
    if (cell.first && cell.second && *cell.second > 0) {
      const double ratio = 100.0 *
                           (static_cast<double>(*cell.first) -
                            static_cast<double>(*cell.second)) /
                           static_cast<double>(*cell.second);
      os << detail::fmt_fixed2(ratio);
    } else {
      os << 'x';
    }
    os << '\n';
  }
  return os.str();
}

// Cost per request by (area, duration, delta, method); multiple records in
// one cell are averaged. Runs without a cost render "x".
inline std::string cost_per_request_table(const std::vector<RunRecord>& records) {
  using Key = std::tuple<std::string, double, double, std::string>;
  std::map<Key, std::pair<double, std::uint64_t>> cells;  // sum, count
  std::map<Key, bool> seen;
  for (const RunRecord& r : records) {
    const Key k{r.area, r.duration_min, r.delta_min, r.method};
    seen[k] = true;
    if (r.cost_per_request_s) {
      cells[k].first += *r.cost_per_request_s;
      cells[k].second += 1;
    }
  }
  std::ostringstream os;
  os << "area,duration_min,delta_min,method,cost_per_request_s\n";
  for (const auto& [key, _] : seen) {
    os << std::get<0>(key) << ',' << detail::fmt_double(std::get<1>(key)) << ','
       << detail::fmt_double(std::get<2>(key)) << ',' << std::get<3>(key) << ',';
    const auto it = cells.find(key);
    if (it != cells.end() && it->second.second > 0)
      os << detail::fmt_double(it->second.first /
                               static_cast<double>(it->second.second));
    else
      os << 'x';
    os << '\n';
  }
  return os.str();
}

// Per-solution occupancy breakdown: travel seconds and share of drive time
// per onboard-count level. Invalid solution files are errors.
inline std::string occupancy_report(const std::vector<std::filesystem::path>& solutions) {
  std::ostringstream os;
  os << "solution,occupancy,seconds,share_percent\n";
  for (const auto& path : solutions) {
    const auto [sf, inst] = read_solution_with_instance(path);
    const auto violations = validate_solution(sf.solution, inst);
    if (!violations.empty())
      throw ValidationError(path.string() + ": invalid solution: " +
                            violations.front().message);
    const auto hist = occupancy_histogram(sf.solution, inst);
    Seconds total = 0;
    for (Seconds s : hist) total += s;
    for (std::size_t level = 0; level < hist.size(); ++level) {
      const double share =
          total == 0 ? 0.0
                     : 100.0 * static_cast<double>(hist[level]) / static_cast<double>(total);
      os << path.string() << ',' << level << ',' << hist[level] << ','
         << detail::fmt_fixed2(share) << '\n';
    }
  }
  return os.str();
}

}  // namespace darp
