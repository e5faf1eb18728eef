#pragma once

// Fleet sizing: the smallest k such that the insertion heuristic serves every
// request using the first k starts of a fixed shuffled candidate order, found
// by binary search, then a 5% buffer rounded up. The shuffled order is
// returned so callers can build the actual fleet from the same prefix the
// search certified.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "darp/insertion.hpp"
#include "darp/instance.hpp"
#include "darp/travel_time_matrix.hpp"
#include "darp/types.hpp"

namespace darp {

struct FleetSizing {
  std::uint32_t minimal = 0;  // smallest IH-feasible fleet
  std::uint32_t sized = 0;    // ceil(1.05 * minimal), the answer
  std::vector<NodeId> order;  // shuffled candidate starts used by the search
};

inline std::uint32_t buffered_fleet(std::uint32_t k) { return (21 * k + 19) / 20; }

namespace detail {

inline Instance sizing_instance(const std::vector<Request>& demand,
                                const std::vector<NodeId>& order, std::uint32_t k,
                                const TravelTimeMatrix& matrix, Seconds max_delay,
                                std::uint32_t capacity) {
  Instance inst;
  inst.config.area = "fleet-sizing";
  inst.config.epoch_iso = "0";
  inst.config.max_delay_s = max_delay;
  inst.config.duration_s = demand.empty() ? 1 : demand.back().pickup_time + 1;
  inst.requests = demand;
  inst.vehicles.reserve(k);
  for (std::uint32_t i = 0; i < k; ++i)
    inst.vehicles.push_back({i, order[i], capacity});
  inst.matrix = std::shared_ptr<const TravelTimeMatrix>(&matrix, [](const TravelTimeMatrix*) {});
  return inst;
}

}  // namespace detail

// `demand` must be sorted by pickup time with dense ids (as produced by
// generate_demand). Throws SolverError when even the full candidate pool
// cannot serve all requests, listing the unserved ids.
inline FleetSizing size_fleet(const std::vector<Request>& demand,
                              const std::vector<NodeId>& candidate_starts,
                              const TravelTimeMatrix& matrix, Seconds max_delay,
                              std::uint32_t capacity, Rng& rng) {
  if (demand.empty()) throw ValidationError("fleet sizing needs at least one request");
  if (candidate_starts.empty())
    throw ValidationError("fleet sizing needs at least one candidate start");

  FleetSizing result;
  result.order = candidate_starts;
  rng.shuffle(result.order);
  const auto pool = static_cast<std::uint32_t>(result.order.size());

  auto unserved_with = [&](std::uint32_t k) {
    const Instance inst =
        detail::sizing_instance(demand, result.order, k, matrix, max_delay, capacity);
    return run_insertion(inst).unserved;
  };

  const auto full = unserved_with(pool);
  if (!full.empty()) {
    std::string msg = "insertion heuristic cannot serve all requests with the full "
                      "candidate pool; unserved:";
    for (RequestId r : full) msg += " " + std::to_string(r);
    throw SolverError(msg);
  }

  std::uint32_t lo = 1, hi = pool;
  while (lo < hi) {
    const std::uint32_t mid = lo + (hi - lo) / 2;
    if (unserved_with(mid).empty())
      hi = mid;
    else
      lo = mid + 1;
  }
  result.minimal = lo;
  result.sized = buffered_fleet(lo);
  return result;
}

}  // namespace darp
