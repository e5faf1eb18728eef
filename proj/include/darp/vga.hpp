#pragma once

// Vehicle-group assignment solver. Per vehicle, feasible request groups are
// grown incrementally: a size-k group is considered only when every size-
// (k-1) subset proved feasible (feasibility is closed downward because the
// travel-time matrix satisfies the triangle inequality). Each candidate group
// gets an exact minimum-cost stop sequence from a pruned depth-first search.
// Group selection is a set-partitioning integer program: one group per
// vehicle (empty allowed, cost 0), every request covered exactly once.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "darp/assignment_ilp.hpp"
#include "darp/insertion.hpp"
#include "darp/instance.hpp"
#include "darp/solution.hpp"
#include "darp/types.hpp"

namespace darp {

struct VehicleGroup {
  VehicleId vehicle = 0;
  std::vector<RequestId> requests;  // sorted
  std::vector<Stop> stops;          // minimum-cost feasible sequence
  Seconds cost = 0;
};

struct AssignmentProblem {
  std::vector<VehicleGroup> groups;  // includes one empty group per vehicle
  std::size_t request_count = 0;
  std::size_t vehicle_count = 0;
  bool cap_reached = false;  // some feasible group hit the size cap

  // Requests no candidate group contains; non-empty breaks the invariant.
  std::vector<RequestId> uncovered() const {
    std::vector<bool> seen(request_count, false);
    for (const VehicleGroup& g : groups)
      for (RequestId r : g.requests) seen[r] = true;
    std::vector<RequestId> out;
    for (RequestId r = 0; r < request_count; ++r)
      if (!seen[r]) out.push_back(r);
    return out;
  }
};

struct BestRoute {
  bool feasible = false;
  std::vector<Stop> stops;
  Seconds cost = 0;
};

namespace detail {

struct SequencerState {
  const Instance* inst;
  const Vehicle* vehicle;
  const std::vector<RequestId>* group;
  std::vector<Stop> current;
  std::vector<Stop> best_stops;
  Seconds best_cost = 0;
  bool found = false;
  std::uint32_t picked = 0, dropped = 0;  // bitmasks over group indices
};

inline void sequence_dfs(SequencerState& st, NodeId loc, Seconds now, Seconds cost,
                         std::uint32_t onboard) {
  const auto& group = *st.group;
  const Instance& inst = *st.inst;
  const std::uint32_t k = static_cast<std::uint32_t>(group.size());

  if (st.dropped == (1u << k) - 1) {
    if (!st.found || cost < st.best_cost) {
      st.found = true;
      st.best_cost = cost;
      st.best_stops = st.current;
    }
    return;
  }
  if (st.found && cost >= st.best_cost) return;

  // Deadline pruning: every open request must still be reachable in time.
  for (std::uint32_t i = 0; i < k; ++i) {
    const Request& r = inst.requests[group[i]];
    if (!(st.picked & (1u << i))) {
      if (now + inst.travel(loc, r.origin) > r.pickup_time + inst.config.max_delay_s) return;
    } else if (!(st.dropped & (1u << i))) {
      if (now + inst.travel(loc, r.destination) >
          r.pickup_time + r.direct_time + inst.config.max_delay_s)
        return;
    }
  }

  for (std::uint32_t i = 0; i < k; ++i) {
    const Request& r = inst.requests[group[i]];
    if (!(st.picked & (1u << i))) {
      if (onboard + 1 > st.vehicle->capacity) continue;
      const Seconds leg = inst.travel(loc, r.origin);
      const Seconds service = std::max(now + leg, r.pickup_time);
      st.picked |= 1u << i;
      st.current.push_back(pickup(group[i]));
      sequence_dfs(st, r.origin, service, cost + leg, onboard + 1);
      st.current.pop_back();
      st.picked &= ~(1u << i);
    } else if (!(st.dropped & (1u << i))) {
      const Seconds leg = inst.travel(loc, r.destination);
      const Seconds service = now + leg;
      if (service > r.pickup_time + r.direct_time + inst.config.max_delay_s) continue;
      st.dropped |= 1u << i;
      st.current.push_back(dropoff(group[i]));
      sequence_dfs(st, r.destination, service, cost + leg, onboard - 1);
      st.current.pop_back();
      st.dropped &= ~(1u << i);
    }
  }
}

}  // namespace detail

// Exact minimum-cost feasible stop sequence for one (vehicle, group) pair.
// Ties break toward the lexicographically first sequence in the DFS order
// (pickups/dropoffs tried in ascending request order).
inline BestRoute best_route_for_group(const Vehicle& vehicle,
                                      const std::vector<RequestId>& group,
                                      const Instance& inst, std::uint32_t cap = 8) {
  if (group.size() > cap)
    throw ValidationError("group of size " + std::to_string(group.size()) +
                          " exceeds cap " + std::to_string(cap));
  if (group.size() > 31) throw ValidationError("group too large for sequencer");
  for (RequestId r : group)
    if (r >= inst.requests.size())
      throw ValidationError("group references unknown request " + std::to_string(r));

  BestRoute out;
  if (group.empty()) {
    out.feasible = true;
    return out;
  }
  detail::SequencerState st;
  st.inst = &inst;
  st.vehicle = &vehicle;
  st.group = &group;
  st.current.reserve(group.size() * 2);
  detail::sequence_dfs(st, vehicle.start, 0, 0, 0);
  if (!st.found) return out;

  // The DFS mirrors the scheduling rules; re-validate through the authority.
  const ScheduleResult check = compute_schedule(vehicle, st.best_stops, inst);
  if (!check.feasible)
    throw SolverError("sequencer produced an infeasible route");
  out.feasible = true;
  out.stops = std::move(st.best_stops);
  out.cost = st.best_cost;
  return out;
}

struct VgaOptions {
  std::uint32_t group_cap = 8;
  unsigned threads = 0;       // 0 = hardware concurrency
  double time_limit_s = 0.0;  // <= 0 = unlimited, covers groups + assignment
  bool seed_with_ih = true;
  IlpBackend* backend = nullptr;  // default: built-in branch-and-bound
};

namespace detail {

struct VehicleGroupGen {
  std::vector<VehicleGroup> groups;
  bool cap_reached = false;
};

inline VehicleGroupGen generate_groups_for_vehicle(const Instance& inst,
                                                   const Vehicle& vehicle,
                                                   std::uint32_t cap,
                                                   const std::atomic<bool>& expired) {
  VehicleGroupGen out;
  out.groups.push_back({vehicle.id, {}, {}, 0});  // idle option

  std::set<std::vector<RequestId>> prev_level;
  for (RequestId r = 0; r < inst.requests.size(); ++r) {
    if (expired.load(std::memory_order_relaxed)) return out;
    const std::vector<RequestId> g{r};
    const BestRoute br = best_route_for_group(vehicle, g, inst, cap);
    if (br.feasible) {
      out.groups.push_back({vehicle.id, g, br.stops, br.cost});
      prev_level.insert(g);
    }
  }

  if (cap == 1 && !prev_level.empty()) out.cap_reached = true;

  for (std::uint32_t size = 2; size <= cap && !prev_level.empty(); ++size) {
    std::set<std::vector<RequestId>> level;
    for (const auto& parent : prev_level) {
      if (expired.load(std::memory_order_relaxed)) return out;
      for (RequestId r = parent.back() + 1; r < inst.requests.size(); ++r) {
        std::vector<RequestId> cand = parent;
        cand.push_back(r);
        // Downward closure: every subset dropping one parent member must be
        // feasible too (the subset dropping r is the parent itself).
        bool closed = true;
        for (std::size_t skip = 0; skip + 1 < cand.size() && closed; ++skip) {
          std::vector<RequestId> sub;
          sub.reserve(cand.size() - 1);
          for (std::size_t i = 0; i < cand.size(); ++i)
            if (i != skip) sub.push_back(cand[i]);
          closed = prev_level.count(sub) > 0;
        }
        if (!closed) continue;
        const BestRoute br = best_route_for_group(vehicle, cand, inst, cap);
        if (br.feasible) {
          out.groups.push_back({vehicle.id, cand, br.stops, br.cost});
          level.insert(std::move(cand));
        }
      }
    }
    if (size == cap && !level.empty()) out.cap_reached = true;
    prev_level = std::move(level);
  }
  return out;
}

}  // namespace detail

// Enumerates all feasible (vehicle, group) pairs up to the cap, in parallel
// across vehicles. Deterministic: results are assembled in vehicle order and
// per-vehicle enumeration order is fixed.
inline AssignmentProblem generate_groups(const Instance& inst, std::uint32_t cap = 8,
                                         unsigned threads = 0,
                                         const std::atomic<bool>* deadline_expired = nullptr) {
  AssignmentProblem problem;
  problem.request_count = inst.requests.size();
  problem.vehicle_count = inst.vehicles.size();

  static const std::atomic<bool> never_expired{false};
  const std::atomic<bool>& expired = deadline_expired ? *deadline_expired : never_expired;

  const std::size_t m = inst.vehicles.size();
  if (threads == 0) threads = std::thread::hardware_concurrency();
  if (threads == 0) threads = 1;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(m, 1)));

  std::vector<detail::VehicleGroupGen> per_vehicle(m);
  if (threads <= 1 || m <= 1) {
    for (std::size_t v = 0; v < m; ++v)
      per_vehicle[v] =
          detail::generate_groups_for_vehicle(inst, inst.vehicles[v], cap, expired);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&]() {
        for (std::size_t v = next.fetch_add(1); v < m; v = next.fetch_add(1))
          per_vehicle[v] =
              detail::generate_groups_for_vehicle(inst, inst.vehicles[v], cap, expired);
      });
    for (std::thread& th : pool) th.join();
  }

  for (auto& gen : per_vehicle) {
    problem.cap_reached = problem.cap_reached || gen.cap_reached;
    for (auto& g : gen.groups) problem.groups.push_back(std::move(g));
  }
  return problem;
}

struct AssignmentOutcome {
  IlpStatus status = IlpStatus::timeout;
  Solution solution;  // meaningful when status is optimal or feasible
  std::uint64_t nodes = 0;
};

// Solves the set-partitioning program over the candidate groups and
// assembles the selected groups into a Solution. `warm_start` optionally
// seeds the incumbent from a known-feasible solution (e.g. the insertion
// heuristic); seeding never changes the proven optimum.
inline AssignmentOutcome solve_assignment(const AssignmentProblem& problem,
                                          const Instance& inst, double time_limit_s = 0.0,
                                          IlpBackend* backend = nullptr,
                                          const Solution* warm_start = nullptr) {
  const auto uncov = problem.uncovered();
  if (!uncov.empty()) {
    std::string msg = "no vehicle can serve request";
    msg += uncov.size() > 1 ? "s" : "";
    for (RequestId r : uncov) msg += " " + std::to_string(r);
    throw SolverError(msg);
  }

  const std::size_t n = problem.request_count;
  IlpModel model;
  model.rows = static_cast<int>(n + problem.vehicle_count);
  model.cost.reserve(problem.groups.size());
  model.col_rows.reserve(problem.groups.size());
  // Column lookup for warm-start mapping: (vehicle, request set) -> column.
  std::map<std::pair<VehicleId, std::vector<RequestId>>, int> col_of;
  for (std::size_t j = 0; j < problem.groups.size(); ++j) {
    const VehicleGroup& g = problem.groups[j];
    std::vector<int> rows;
    rows.reserve(g.requests.size() + 1);
    for (RequestId r : g.requests) rows.push_back(static_cast<int>(r));
    rows.push_back(static_cast<int>(n + g.vehicle));
    model.cost.push_back(g.cost);
    model.col_rows.push_back(std::move(rows));
    col_of.emplace(std::make_pair(g.vehicle, g.requests), static_cast<int>(j));
  }

  IlpOptions opts;
  opts.time_limit_s = time_limit_s;
  if (warm_start && warm_start->routes.size() == problem.vehicle_count) {
    std::vector<int> seed;
    bool ok = true;
    for (const Route& route : warm_start->routes) {
      std::vector<RequestId> served;
      for (const Stop& s : route.stops)
        if (s.kind == StopKind::pickup) served.push_back(s.request);
      std::sort(served.begin(), served.end());
      const auto it = col_of.find({route.vehicle, served});
      if (it == col_of.end()) {
        ok = false;  // e.g. a route longer than the group cap
        break;
      }
      seed.push_back(it->second);
    }
    if (ok) opts.warm_start = std::move(seed);
  }

  BranchAndBoundBackend builtin;
  IlpBackend& solver = backend ? *backend : static_cast<IlpBackend&>(builtin);
  const IlpSolution ilp = solver.solve(model, opts);

  AssignmentOutcome out;
  out.status = ilp.status;
  out.nodes = ilp.nodes;
  if (ilp.status == IlpStatus::infeasible)
    throw SolverError("assignment program infeasible despite full coverage");
  if (ilp.status == IlpStatus::timeout) return out;

  out.solution.routes.resize(problem.vehicle_count);
  for (std::size_t v = 0; v < problem.vehicle_count; ++v)
    out.solution.routes[v].vehicle = static_cast<VehicleId>(v);
  out.solution.total_cost = 0;
  for (int j : ilp.chosen) {
    const VehicleGroup& g = problem.groups[static_cast<std::size_t>(j)];
    Route& route = out.solution.routes[g.vehicle];
    route.stops = g.stops;
    route.schedule = compute_schedule(inst.vehicle(g.vehicle), route.stops, inst).times;
    out.solution.total_cost += g.cost;
  }
  return out;
}

struct VgaResult {
  SolveStatus status = SolveStatus::timeout;
  Solution solution;          // valid when status is optimal or feasible
  bool cap_reached = false;   // a feasible group hit the size cap
  std::size_t group_count = 0;
  std::uint64_t nodes = 0;
};

inline VgaResult solve_vga(const Instance& inst, const VgaOptions& opts = {}) {
  const auto start = std::chrono::steady_clock::now();
  const auto elapsed = [&]() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  VgaResult res;

  std::optional<Solution> seed;
  if (opts.seed_with_ih) {
    try {
      seed = solve_ih(inst);
    } catch (const SolverError&) {
      // No full-coverage heuristic solution; proceed unseeded.
    }
  }

  // Group generation under a soft deadline, polled from a watchdog thread.
  std::atomic<bool> expired{false};
  std::atomic<bool> done{false};
  std::thread watchdog;
  if (opts.time_limit_s > 0.0) {
    watchdog = std::thread([&]() {
      while (!done.load()) {
        if (elapsed() >= opts.time_limit_s) {
          expired.store(true);
          return;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
      }
    });
  }
  AssignmentProblem problem = generate_groups(inst, opts.group_cap, opts.threads, &expired);
  done.store(true);
  if (watchdog.joinable()) watchdog.join();

  res.cap_reached = problem.cap_reached;
  res.group_count = problem.groups.size();
  if (expired.load()) {
    // Generation ran out of time; fall back to the heuristic incumbent if any.
    if (seed) {
      res.status = SolveStatus::feasible;
      res.solution = *seed;
    }
    return res;
  }

  double ilp_budget = 0.0;
  if (opts.time_limit_s > 0.0) {
    ilp_budget = opts.time_limit_s - elapsed();
    if (ilp_budget <= 0.0) ilp_budget = 1e-9;
  }
  const AssignmentOutcome outcome =
      solve_assignment(problem, inst, ilp_budget, opts.backend, seed ? &*seed : nullptr);
  res.nodes = outcome.nodes;
  switch (outcome.status) {
    case IlpStatus::optimal:
      res.status = SolveStatus::optimal;
      res.solution = outcome.solution;
      break;
    case IlpStatus::feasible:
      res.status = SolveStatus::feasible;
      res.solution = outcome.solution;
      break;
    default:
      res.status = SolveStatus::timeout;
      break;
  }
  return res;
}

}  // namespace darp
