#pragma once

// Route and solution model shared by all solvers. compute_schedule is the
// single feasibility authority: a stop sequence is feasible iff it passes
// here. Scheduling is earliest-feasible: the vehicle leaves its start at
// time 0, waiting is allowed anywhere and costs nothing, service takes zero
// time, and every dropoff must happen within
//   pickup_time + f_t(origin, destination) + max_delay.
//
// Solution file format:
//   [solution]
//   instance = <path>
//   method = <name>
//   total_cost_s = <seconds>
//   wall_time_ms = <ms>
//   route <vehicle_id> [p:<request_id>|d:<request_id>]...
// One route line per vehicle; schedules are recomputed on load.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "darp/instance.hpp"
#include "darp/types.hpp"

namespace darp {

enum class StopKind : std::uint8_t { pickup, dropoff };

struct Stop {
  StopKind kind = StopKind::pickup;
  RequestId request = 0;
  bool operator==(const Stop&) const = default;
};

inline Stop pickup(RequestId r) { return {StopKind::pickup, r}; }
inline Stop dropoff(RequestId r) { return {StopKind::dropoff, r}; }

struct Route {
  VehicleId vehicle = 0;
  std::vector<Stop> stops;
  std::vector<Seconds> schedule;  // per-stop service time, computed
  bool operator==(const Route&) const = default;
};

struct Solution {
  std::vector<Route> routes;  // one per vehicle, index == vehicle id
  Seconds total_cost = 0;     // vehicle travel seconds
};

enum class ViolationKind : std::uint8_t {
  unknown_request,
  duplicate_stop,
  precedence,
  capacity,
  max_delay,
  pickup_delay,
  unserved,
  multiple_service,
  split_route,
  missing_dropoff,
  malformed,
  cost_mismatch,
};

struct Violation {
  ViolationKind kind;
  std::string message;
};

namespace detail {

// Forward walk over a stop sequence. Computes earliest-feasible service
// times and reports every violated constraint through `sink`; the walk stops
// early if the sink returns false. Stops that cannot be located (unknown
// request) are reported and skipped.
template <class Sink>
inline std::vector<Seconds> schedule_sweep(const Vehicle& vehicle,
                                           const std::vector<Stop>& stops,
                                           const Instance& inst, Sink&& sink) {
  std::vector<Seconds> times;
  times.reserve(stops.size());
  NodeId loc = vehicle.start;
  Seconds now = 0;
  std::uint32_t onboard = 0;
  std::vector<bool> picked(inst.requests.size(), false);
  std::vector<bool> dropped(inst.requests.size(), false);

  for (std::size_t k = 0; k < stops.size(); ++k) {
    const Stop& s = stops[k];
    if (s.request >= inst.requests.size()) {
      times.push_back(now);
      if (!sink(Violation{ViolationKind::unknown_request,
                          "stop references unknown request " +
                              std::to_string(s.request)}))
        return times;
      continue;
    }
    const Request& r = inst.requests[s.request];
    if (s.kind == StopKind::pickup) {
      if (picked[s.request]) {
        times.push_back(now);
        if (!sink(Violation{ViolationKind::duplicate_stop,
                            "request " + std::to_string(s.request) +
                                " picked up twice"}))
          return times;
        continue;
      }
      picked[s.request] = true;
      now = std::max(now + inst.travel(loc, r.origin), r.pickup_time);
      loc = r.origin;
      times.push_back(now);
      ++onboard;
      if (onboard > vehicle.capacity) {
        if (!sink(Violation{ViolationKind::capacity,
                            "vehicle " + std::to_string(vehicle.id) + " carries " +
                                std::to_string(onboard) + " > capacity " +
                                std::to_string(vehicle.capacity)}))
          return times;
      }
    } else {
      if (dropped[s.request]) {
        times.push_back(now);
        if (!sink(Violation{ViolationKind::duplicate_stop,
                            "request " + std::to_string(s.request) +
                                " dropped off twice"}))
          return times;
        continue;
      }
      if (!picked[s.request]) {
        times.push_back(now);
        if (!sink(Violation{ViolationKind::precedence,
                            "request " + std::to_string(s.request) +
                                " dropped off before pickup"}))
          return times;
        continue;
      }
      dropped[s.request] = true;
      now += inst.travel(loc, r.destination);
      loc = r.destination;
      times.push_back(now);
      --onboard;
      const Seconds deadline = r.pickup_time + r.direct_time + inst.config.max_delay_s;
      if (now > deadline) {
        if (!sink(Violation{ViolationKind::max_delay,
                            "request " + std::to_string(s.request) + " dropped at " +
                                std::to_string(now) + " > deadline " +
                                std::to_string(deadline)}))
          return times;
      }
    }
  }
  return times;
}

}  // namespace detail

struct ScheduleResult {
  bool feasible = false;
  std::vector<Seconds> times;            // swept service times (also when infeasible)
  std::optional<Violation> violation;    // first violated constraint
};

// Earliest-feasible schedule for a stop sequence, or the first violated
// constraint. Unknown request ids and duplicate stops are caller errors and
// throw; precedence, capacity and max-delay violations are returned as data.
inline ScheduleResult compute_schedule(const Vehicle& vehicle,
                                       const std::vector<Stop>& stops,
                                       const Instance& inst) {
  ScheduleResult res;
  res.times = detail::schedule_sweep(vehicle, stops, inst, [&](Violation v) {
    res.violation = std::move(v);
    return false;
  });
  if (res.violation) {
    if (res.violation->kind == ViolationKind::unknown_request ||
        res.violation->kind == ViolationKind::duplicate_stop)
      throw ValidationError("compute_schedule: " + res.violation->message);
    res.feasible = false;
  } else {
    res.feasible = true;
  }
  return res;
}

inline NodeId stop_location(const Stop& s, const Instance& inst) {
  const Request& r = inst.request(s.request);
  return s.kind == StopKind::pickup ? r.origin : r.destination;
}

// Travel seconds along the driven leg sequence, starting from the vehicle's
// start location. Waiting costs nothing.
inline Seconds stops_cost(const Vehicle& vehicle, const std::vector<Stop>& stops,
                          const Instance& inst) {
  NodeId loc = vehicle.start;
  Seconds cost = 0;
  for (const Stop& s : stops) {
    const NodeId next = stop_location(s, inst);
    cost += inst.travel(loc, next);
    loc = next;
  }
  return cost;
}

inline Seconds route_cost(const Route& route, const Instance& inst) {
  return stops_cost(inst.vehicle(route.vehicle), route.stops, inst);
}

// Checks every route invariant plus exactly-once coverage of all requests.
// Returns the full violation list; an empty list means the solution is valid.
inline std::vector<Violation> validate_solution(const Solution& sol, const Instance& inst) {
  std::vector<Violation> out;

  if (sol.routes.size() != inst.vehicles.size()) {
    out.push_back({ViolationKind::malformed,
                   "solution has " + std::to_string(sol.routes.size()) +
                       " routes for " + std::to_string(inst.vehicles.size()) +
                       " vehicles"});
    return out;
  }
  for (std::size_t i = 0; i < sol.routes.size(); ++i) {
    if (sol.routes[i].vehicle != i) {
      out.push_back({ViolationKind::malformed,
                     "route at position " + std::to_string(i) + " belongs to vehicle " +
                         std::to_string(sol.routes[i].vehicle)});
      return out;
    }
  }

  const std::size_t n = inst.requests.size();
  std::vector<int> pickup_route(n, -1), dropoff_route(n, -1);
  std::vector<int> pickup_count(n, 0), dropoff_count(n, 0);
  bool refs_ok = true;

  for (const Route& route : sol.routes) {
    const Vehicle& vehicle = inst.vehicle(route.vehicle);
    const auto times = detail::schedule_sweep(vehicle, route.stops, inst, [&](Violation v) {
      v.message = "vehicle " + std::to_string(route.vehicle) + ": " + v.message;
      out.push_back(std::move(v));
      return true;
    });
    for (const Stop& s : route.stops) {
      if (s.request >= n) {
        refs_ok = false;
        continue;
      }
      if (s.kind == StopKind::pickup) {
        ++pickup_count[s.request];
        pickup_route[s.request] = static_cast<int>(route.vehicle);
      } else {
        ++dropoff_count[s.request];
        dropoff_route[s.request] = static_cast<int>(route.vehicle);
      }
    }
    // Implied bound: pickup no later than pickup_time + max_delay. Follows
    // from the dropoff bound over a shortest-path matrix; asserted anyway.
    for (std::size_t k = 0; k < route.stops.size(); ++k) {
      const Stop& s = route.stops[k];
      if (s.kind != StopKind::pickup || s.request >= n) continue;
      const Request& r = inst.requests[s.request];
      if (times[k] > r.pickup_time + inst.config.max_delay_s)
        out.push_back({ViolationKind::pickup_delay,
                       "request " + std::to_string(s.request) + " picked up at " +
                           std::to_string(times[k]) + " > " +
                           std::to_string(r.pickup_time + inst.config.max_delay_s)});
    }
  }

  for (RequestId r = 0; r < n; ++r) {
    if (pickup_count[r] == 0 && dropoff_count[r] == 0) {
      out.push_back({ViolationKind::unserved, "request " + std::to_string(r) + " unserved"});
      continue;
    }
    if (pickup_count[r] > 1 || dropoff_count[r] > 1) {
      out.push_back({ViolationKind::multiple_service,
                     "request " + std::to_string(r) + " served multiple times"});
      continue;
    }
    if (pickup_count[r] == 1 && dropoff_count[r] == 0)
      out.push_back({ViolationKind::missing_dropoff,
                     "request " + std::to_string(r) + " picked up but never dropped off"});
    else if (pickup_count[r] == 1 && dropoff_count[r] == 1 &&
             pickup_route[r] != dropoff_route[r])
      out.push_back({ViolationKind::split_route,
                     "request " + std::to_string(r) + " pickup and dropoff on different routes"});
  }

  if (refs_ok) {
    Seconds total = 0;
    for (const Route& route : sol.routes) total += route_cost(route, inst);
    if (total != sol.total_cost)
      out.push_back({ViolationKind::cost_mismatch,
                     "stored total cost " + std::to_string(sol.total_cost) +
                         " != recomputed " + std::to_string(total)});
  }
  return out;
}

// Travel seconds by onboard passenger count. Index = occupancy level,
// 0 = empty repositioning; waiting time is not attributed anywhere.
inline std::vector<Seconds> occupancy_histogram(const Solution& sol, const Instance& inst) {
  std::uint32_t max_cap = 0;
  for (const Vehicle& v : inst.vehicles) max_cap = std::max(max_cap, v.capacity);
  std::vector<Seconds> hist(max_cap + 1, 0);
  for (const Route& route : sol.routes) {
    NodeId loc = inst.vehicle(route.vehicle).start;
    std::uint32_t onboard = 0;
    for (const Stop& s : route.stops) {
      const NodeId next = stop_location(s, inst);
      hist.at(onboard) += inst.travel(loc, next);
      loc = next;
      onboard += s.kind == StopKind::pickup ? 1 : -1;
    }
  }
  return hist;
}

struct SolutionFile {
  std::string instance_path;
  std::string method;
  Seconds total_cost_s = 0;
  std::uint64_t wall_time_ms = 0;
  Solution solution;
};

inline void write_solution(const Solution& sol, const std::string& instance_path,
                           const std::string& method, std::uint64_t wall_time_ms,
                           const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write solution file " + path.string());
  out << "[solution]\n";
  out << "instance = " << instance_path << "\n";
  out << "method = " << method << "\n";
  out << "total_cost_s = " << sol.total_cost << "\n";
  out << "wall_time_ms = " << wall_time_ms << "\n";
  for (const Route& r : sol.routes) {
    out << "route " << r.vehicle;
    for (const Stop& s : r.stops)
      out << " " << (s.kind == StopKind::pickup ? "p:" : "d:") << s.request;
    out << "\n";
  }
  if (!out) throw IoError("write failed for " + path.string());
}

// Parses a solution against an already-loaded instance. Schedules are
// recomputed; a stored cost that disagrees with the recomputation is
// rejected. Constraint violations are not rejected here -- run
// validate_solution on the result.
inline SolutionFile read_solution(const std::filesystem::path& path, const Instance& inst) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open solution file " + path.string());
  SolutionFile sf;
  sf.solution.routes.resize(inst.vehicles.size());
  std::vector<bool> seen(inst.vehicles.size(), false);
  for (std::size_t i = 0; i < inst.vehicles.size(); ++i)
    sf.solution.routes[i].vehicle = static_cast<VehicleId>(i);

  std::string line;
  std::size_t lineno = 0;
  bool in_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::blank_or_comment(line)) continue;
    if (line == "[solution]") {
      in_header = true;
      continue;
    }
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "route") {
      VehicleId vid;
      if (!(ls >> vid)) detail::parse_fail(path, lineno, "bad route line");
      if (vid >= inst.vehicles.size())
        detail::parse_fail(path, lineno, "route for unknown vehicle " + std::to_string(vid));
      if (seen[vid])
        detail::parse_fail(path, lineno, "duplicate route line for vehicle " + std::to_string(vid));
      seen[vid] = true;
      std::string stop;
      while (ls >> stop) {
        if (stop.size() < 3 || stop[1] != ':' || (stop[0] != 'p' && stop[0] != 'd'))
          detail::parse_fail(path, lineno, "bad stop spec '" + stop + "'");
        RequestId rid;
        try {
          rid = static_cast<RequestId>(std::stoul(stop.substr(2)));
        } catch (const std::exception&) {
          detail::parse_fail(path, lineno, "bad stop spec '" + stop + "'");
        }
        sf.solution.routes[vid].stops.push_back(
            {stop[0] == 'p' ? StopKind::pickup : StopKind::dropoff, rid});
      }
    } else if (in_header) {
      std::string eq, value;
      ls >> eq;
      std::getline(ls, value);
      const auto first = value.find_first_not_of(' ');
      value = first == std::string::npos ? "" : value.substr(first);
      if (eq != "=") detail::parse_fail(path, lineno, "expected 'key = value'");
      if (tag == "instance")
        sf.instance_path = value;
      else if (tag == "method")
        sf.method = value;
      else if (tag == "total_cost_s")
        sf.total_cost_s = std::stoull(value);
      else if (tag == "wall_time_ms")
        sf.wall_time_ms = std::stoull(value);
      else
        detail::parse_fail(path, lineno, "unknown solution key '" + tag + "'");
    } else {
      detail::parse_fail(path, lineno, "content before [solution] header");
    }
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i])
      throw ParseError(path.string() + ": no route line for vehicle " + std::to_string(i));

  bool refs_ok = true;
  for (Route& r : sf.solution.routes) {
    for (const Stop& s : r.stops)
      if (s.request >= inst.requests.size()) refs_ok = false;
    if (refs_ok)
      r.schedule = detail::schedule_sweep(inst.vehicle(r.vehicle), r.stops, inst,
                                          [](const Violation&) { return true; });
  }
  if (refs_ok) {
    Seconds total = 0;
    for (const Route& r : sf.solution.routes) total += route_cost(r, inst);
    if (total != sf.total_cost_s)
      throw ValidationError(path.string() + ": stored total_cost_s " +
                            std::to_string(sf.total_cost_s) + " != recomputed " +
                            std::to_string(total));
  }
  sf.solution.total_cost = sf.total_cost_s;
  return sf;
}

// Convenience overload: loads the referenced instance first (path resolved
// relative to the solution file), then parses against it.
inline std::pair<SolutionFile, Instance> read_solution_with_instance(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open solution file " + path.string());
  std::string line, instance_path;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag, eq;
    ls >> tag >> eq;
    if (tag == "instance" && eq == "=") {
      std::getline(ls, instance_path);
      const auto first = instance_path.find_first_not_of(' ');
      instance_path = first == std::string::npos ? "" : instance_path.substr(first);
      break;
    }
  }
  if (instance_path.empty())
    throw ParseError(path.string() + ": missing instance reference");
  std::filesystem::path ipath(instance_path);
  if (ipath.is_relative()) ipath = path.parent_path() / ipath;
  Instance inst = read_instance(ipath);
  SolutionFile sf = read_solution(path, inst);
  return {std::move(sf), std::move(inst)};
}

}  // namespace darp
