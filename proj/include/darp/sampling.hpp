#pragma once

// Demand sampling: turns zone-obfuscated demand records into point requests
// and vehicle start positions. Zone-specified endpoints are drawn uniformly
// over the zone's nodes, interval-specified times uniformly over the
// interval. All randomness flows through one seeded Rng in a fixed order, so
// generation is reproducible from the seed alone.
//
// Zone file:   zone <zone_id> <node_id> <node_id> ...
// Demand file: record <origin_spec> <dest_spec> <time_spec>
//   location specs: n:<node_id> | z:<zone_id>
//   time specs:     t:<seconds> | i:<start>-<end>   (interval is [start, end))

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "darp/instance.hpp"
#include "darp/travel_time_matrix.hpp"
#include "darp/types.hpp"

namespace darp {

struct Zone {
  ZoneId id = 0;
  std::vector<NodeId> nodes;  // sorted, unique; draw space for sampling
};

struct LocationSpec {
  enum class Kind : std::uint8_t { node, zone };
  Kind kind = Kind::node;
  std::uint64_t id = 0;
  bool operator==(const LocationSpec&) const = default;
};

struct TimeSpec {
  enum class Kind : std::uint8_t { exact, interval };
  Kind kind = Kind::exact;
  Seconds start = 0;
  Seconds end = 0;  // exclusive; unused for exact
  bool operator==(const TimeSpec&) const = default;
};

struct DemandRecord {
  LocationSpec origin;
  LocationSpec destination;
  TimeSpec time;
  bool operator==(const DemandRecord&) const = default;
};

inline std::map<ZoneId, Zone> load_zones(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open zone file " + path.string());
  std::map<ZoneId, Zone> zones;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::blank_or_comment(line)) continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag != "zone") detail::parse_fail(path, lineno, "expected 'zone', got '" + tag + "'");
    Zone z;
    if (!(ls >> z.id)) detail::parse_fail(path, lineno, "missing zone id");
    NodeId node;
    while (ls >> node) z.nodes.push_back(node);
    if (z.nodes.empty()) detail::parse_fail(path, lineno, "zone " + std::to_string(z.id) + " has no nodes");
    if (zones.count(z.id)) detail::parse_fail(path, lineno, "duplicate zone id " + std::to_string(z.id));
    std::sort(z.nodes.begin(), z.nodes.end());
    z.nodes.erase(std::unique(z.nodes.begin(), z.nodes.end()), z.nodes.end());
    zones.emplace(z.id, std::move(z));
  }
  return zones;
}

namespace detail {

inline LocationSpec parse_location_spec(const std::string& s,
                                        const std::filesystem::path& path,
                                        std::size_t lineno) {
  if (s.size() < 3 || s[1] != ':' || (s[0] != 'n' && s[0] != 'z'))
    parse_fail(path, lineno, "bad location spec '" + s + "'");
  LocationSpec spec;
  spec.kind = s[0] == 'n' ? LocationSpec::Kind::node : LocationSpec::Kind::zone;
  try {
    spec.id = std::stoull(s.substr(2));
  } catch (const std::exception&) {
    parse_fail(path, lineno, "bad location spec '" + s + "'");
  }
  return spec;
}

inline TimeSpec parse_time_spec(const std::string& s, const std::filesystem::path& path,
                                std::size_t lineno) {
  if (s.size() < 3 || s[1] != ':' || (s[0] != 't' && s[0] != 'i'))
    parse_fail(path, lineno, "bad time spec '" + s + "'");
  TimeSpec spec;
  try {
    if (s[0] == 't') {
      spec.kind = TimeSpec::Kind::exact;
      spec.start = std::stoull(s.substr(2));
    } else {
      spec.kind = TimeSpec::Kind::interval;
      const auto dash = s.find('-', 2);
      if (dash == std::string::npos) parse_fail(path, lineno, "bad time spec '" + s + "'");
      spec.start = std::stoull(s.substr(2, dash - 2));
      spec.end = std::stoull(s.substr(dash + 1));
      if (spec.start >= spec.end)
        parse_fail(path, lineno, "empty time interval in '" + s + "'");
    }
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    parse_fail(path, lineno, "bad time spec '" + s + "'");
  }
  return spec;
}

}  // namespace detail

inline std::vector<DemandRecord> load_demand(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open demand file " + path.string());
  std::vector<DemandRecord> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::blank_or_comment(line)) continue;
    std::istringstream ls(line);
    std::string tag, o, d, t;
    ls >> tag;
    if (tag != "record")
      detail::parse_fail(path, lineno, "expected 'record', got '" + tag + "'");
    if (!(ls >> o >> d >> t))
      detail::parse_fail(path, lineno, "record needs origin, destination and time specs");
    DemandRecord rec;
    rec.origin = detail::parse_location_spec(o, path, lineno);
    rec.destination = detail::parse_location_spec(d, path, lineno);
    rec.time = detail::parse_time_spec(t, path, lineno);
    records.push_back(rec);
  }
  return records;
}

// Drops zone members that are not in the matrix (typical after contraction
// and SCC filtering). Zones may end up empty; sampling from one is an error,
// which keeps accidental references loud.
inline std::map<ZoneId, Zone> filter_zones(std::map<ZoneId, Zone> zones,
                                           const TravelTimeMatrix& matrix) {
  for (auto& [id, zone] : zones) {
    auto& v = zone.nodes;
    v.erase(std::remove_if(v.begin(), v.end(),
                           [&](NodeId n) { return !matrix.has_node(n); }),
            v.end());
  }
  return zones;
}

inline NodeId sample_location(const Zone& zone, Rng& rng) {
  if (zone.nodes.empty())
    throw ValidationError("zone " + std::to_string(zone.id) + " has no usable nodes");
  return zone.nodes[rng.below(zone.nodes.size())];
}

inline Seconds sample_time(const TimeSpec& spec, Rng& rng) {
  if (spec.kind == TimeSpec::Kind::exact) return spec.start;
  if (spec.start >= spec.end) throw ValidationError("empty time interval");
  return spec.start + rng.below(spec.end - spec.start);
}

namespace detail {

inline NodeId resolve_location(const LocationSpec& spec, const std::map<ZoneId, Zone>& zones,
                               const TravelTimeMatrix& matrix, Rng& rng) {
  if (spec.kind == LocationSpec::Kind::node) {
    if (!matrix.has_node(spec.id))
      throw ValidationError("demand references node " + std::to_string(spec.id) +
                            " absent from the travel-time matrix");
    return spec.id;
  }
  const auto it = zones.find(spec.id);
  if (it == zones.end())
    throw ValidationError("demand references unknown zone " + std::to_string(spec.id));
  return sample_location(it->second, rng);
}

}  // namespace detail

struct DemandGenStats {
  std::size_t excluded_by_window = 0;
  std::size_t dropped_degenerate = 0;  // origin == destination after resampling
};

// One request per record whose pickup time lands in [window_start,
// window_end); times rebased so window_start becomes 0. Per record the draw
// order is fixed: time, then origin, then destination; records excluded by
// the window consume only the time draw. A record whose sampled origin
// equals its destination is redrawn up to 100 times, then dropped with a
// warning. Output sorted by pickup time (ties keep record order), ids dense
// from 0.
inline std::vector<Request> generate_demand(const std::vector<DemandRecord>& records,
                                            const std::map<ZoneId, Zone>& zones,
                                            const TravelTimeMatrix& matrix,
                                            Seconds window_start, Seconds window_end,
                                            Rng& rng, DemandGenStats* stats = nullptr,
                                            std::vector<std::string>* warnings = nullptr) {
  struct Drawn {
    Seconds t;
    NodeId o, d;
    std::size_t record_idx;
  };
  std::vector<Drawn> drawn;
  for (std::size_t k = 0; k < records.size(); ++k) {
    const DemandRecord& rec = records[k];
    const Seconds t = sample_time(rec.time, rng);
    if (t < window_start || t >= window_end) {
      if (stats) ++stats->excluded_by_window;
      continue;
    }
    const bool can_redraw = rec.origin.kind == LocationSpec::Kind::zone ||
                            rec.destination.kind == LocationSpec::Kind::zone;
    NodeId o = detail::resolve_location(rec.origin, zones, matrix, rng);
    NodeId d = detail::resolve_location(rec.destination, zones, matrix, rng);
    int tries = 0;
    while (o == d && can_redraw && tries < 100) {
      if (rec.origin.kind == LocationSpec::Kind::zone)
        o = detail::resolve_location(rec.origin, zones, matrix, rng);
      if (rec.destination.kind == LocationSpec::Kind::zone)
        d = detail::resolve_location(rec.destination, zones, matrix, rng);
      ++tries;
    }
    if (o == d) {
      if (stats) ++stats->dropped_degenerate;
      if (warnings)
        warnings->push_back("record " + std::to_string(k) +
                            " dropped: origin equals destination after resampling");
      continue;
    }
    drawn.push_back({t - window_start, o, d, k});
  }

  std::stable_sort(drawn.begin(), drawn.end(),
                   [](const Drawn& a, const Drawn& b) { return a.t < b.t; });
  std::vector<Request> out;
  out.reserve(drawn.size());
  for (std::size_t i = 0; i < drawn.size(); ++i) {
    const Drawn& g = drawn[i];
    out.push_back({static_cast<RequestId>(i), g.o, g.d, g.t, travel_time(matrix, g.o, g.d)});
  }
  return out;
}

// Vehicle starts come from prior demand: records whose (sampled) pickup time
// falls in [epoch - lookback, epoch). When the pool is at least `count`,
// starts are a uniform shuffle prefix (no repeats); otherwise drawn with
// replacement. Each vehicle starts at the resolved origin of its record.
inline std::vector<Vehicle> generate_vehicles(const std::vector<DemandRecord>& prior,
                                              const std::map<ZoneId, Zone>& zones,
                                              const TravelTimeMatrix& matrix,
                                              Seconds epoch, Seconds lookback,
                                              std::uint32_t count, std::uint32_t capacity,
                                              Rng& rng) {
  if (count == 0) throw ValidationError("vehicle count must be at least 1");
  if (capacity == 0) throw ValidationError("vehicle capacity must be at least 1");
  const Seconds window_lo = epoch > lookback ? epoch - lookback : 0;

  std::vector<std::size_t> pool;
  for (std::size_t k = 0; k < prior.size(); ++k) {
    const Seconds t = sample_time(prior[k].time, rng);
    if (t >= window_lo && t < epoch) pool.push_back(k);
  }
  if (pool.empty())
    throw ValidationError("no prior demand in lookback window [" +
                          std::to_string(window_lo) + ", " + std::to_string(epoch) + ")");

  std::vector<std::size_t> chosen;
  chosen.reserve(count);
  if (pool.size() >= count) {
    rng.shuffle(pool);
    chosen.assign(pool.begin(), pool.begin() + count);
  } else {
    for (std::uint32_t i = 0; i < count; ++i)
      chosen.push_back(pool[rng.below(pool.size())]);
  }

  std::vector<Vehicle> out;
  out.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    const NodeId start =
        detail::resolve_location(prior[chosen[i]].origin, zones, matrix, rng);
    out.push_back({i, start, capacity});
  }
  return out;
}

}  // namespace darp
