#pragma once

// Insertion heuristic. Requests are processed in instance order (sorted by
// desired pickup time); each is inserted at the feasible
// (vehicle, pickup position, dropoff position) with the smallest increase in
// route cost. Ties go to the lowest vehicle id, then the earliest pickup
// position, then the earliest dropoff position. No improvement phase.

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "darp/instance.hpp"
#include "darp/solution.hpp"
#include "darp/types.hpp"

namespace darp {

struct InsertionOutcome {
  Solution solution;                 // partial if some requests are unserved
  std::vector<RequestId> unserved;   // requests with no feasible insertion
};

namespace detail {

// Best feasible insertion of one request into one route, if any.
struct InsertionCandidate {
  bool found = false;
  Seconds delta = 0;
  std::size_t pickup_pos = 0;
  std::size_t dropoff_pos = 0;
};

inline InsertionCandidate best_insertion_in_route(const Instance& inst,
                                                  const Vehicle& vehicle,
                                                  const std::vector<Stop>& stops,
                                                  Seconds base_cost, RequestId rid,
                                                  std::vector<Stop>& scratch) {
  InsertionCandidate best;
  const std::size_t n = stops.size();
  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t j = i + 1; j <= n + 1; ++j) {
      scratch.clear();
      scratch.reserve(n + 2);
      for (std::size_t k = 0; k < i; ++k) scratch.push_back(stops[k]);
      scratch.push_back(pickup(rid));
      for (std::size_t k = i; k + 1 < j; ++k) scratch.push_back(stops[k]);
      scratch.push_back(dropoff(rid));
      for (std::size_t k = j - 1; k < n; ++k) scratch.push_back(stops[k]);

      const ScheduleResult sched = compute_schedule(vehicle, scratch, inst);
      if (!sched.feasible) continue;
      const Seconds delta = stops_cost(vehicle, scratch, inst) - base_cost;
      if (!best.found || delta < best.delta) {
        best = {true, delta, i, j};
      }
    }
  }
  return best;
}

}  // namespace detail

// Runs the heuristic to completion, collecting requests that cannot be
// inserted anywhere instead of failing. Used by fleet sizing, where partial
// coverage is an answer, not an error.
inline InsertionOutcome run_insertion(const Instance& inst) {
  InsertionOutcome out;
  const std::size_t m = inst.vehicles.size();
  out.solution.routes.resize(m);
  std::vector<Seconds> costs(m, 0);
  for (std::size_t v = 0; v < m; ++v)
    out.solution.routes[v].vehicle = static_cast<VehicleId>(v);

  std::vector<Stop> scratch;
  for (const Request& r : inst.requests) {
    bool found = false;
    Seconds best_delta = std::numeric_limits<Seconds>::max();
    std::size_t best_v = 0, best_i = 0, best_j = 0;
    for (std::size_t v = 0; v < m; ++v) {
      const auto cand = detail::best_insertion_in_route(
          inst, inst.vehicles[v], out.solution.routes[v].stops, costs[v], r.id, scratch);
      if (cand.found && (!found || cand.delta < best_delta)) {
        found = true;
        best_delta = cand.delta;
        best_v = v;
        best_i = cand.pickup_pos;
        best_j = cand.dropoff_pos;
      }
    }
    if (!found) {
      out.unserved.push_back(r.id);
      continue;
    }
    auto& stops = out.solution.routes[best_v].stops;
    stops.insert(stops.begin() + static_cast<std::ptrdiff_t>(best_i), pickup(r.id));
    stops.insert(stops.begin() + static_cast<std::ptrdiff_t>(best_j), dropoff(r.id));
    costs[best_v] += best_delta;
  }

  out.solution.total_cost = 0;
  for (std::size_t v = 0; v < m; ++v) {
    Route& route = out.solution.routes[v];
    route.schedule = compute_schedule(inst.vehicles[v], route.stops, inst).times;
    out.solution.total_cost += route_cost(route, inst);
  }
  return out;
}

// Full-coverage variant: throws SolverError when any request cannot be
// inserted, naming the first such request and the first violated constraint
// per vehicle when appending it at the end of that vehicle's route.
inline Solution solve_ih(const Instance& inst) {
  InsertionOutcome out = run_insertion(inst);
  if (out.unserved.empty()) return std::move(out.solution);

  const RequestId rid = out.unserved.front();
  std::string msg = "no feasible insertion for request " + std::to_string(rid);
  for (const Route& route : out.solution.routes) {
    std::vector<Stop> probe = route.stops;
    probe.push_back(pickup(rid));
    probe.push_back(dropoff(rid));
    const ScheduleResult sched = compute_schedule(inst.vehicle(route.vehicle), probe, inst);
    if (!sched.feasible && sched.violation)
      msg += "; vehicle " + std::to_string(route.vehicle) + ": " + sched.violation->message;
  }
  if (out.unserved.size() > 1) {
    msg += "; also unserved:";
    for (std::size_t k = 1; k < out.unserved.size(); ++k)
      msg += " " + std::to_string(out.unserved[k]);
  }
  throw SolverError(msg);
}

}  // namespace darp
