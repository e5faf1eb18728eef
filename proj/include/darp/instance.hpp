#pragma once

// The DARP instance model: requests, vehicles, the travel-time matrix and
// the max-delay parameter, plus (de)serialization.
//
// Instance file format (UTF-8):
//   [config]
//   area = <name>
//   epoch = <ISO-8601 UTC timestamp>
//   duration_s = <seconds>
//   max_delay_s = <seconds>
//   seed = <u64>
//   matrix_file = <path, resolved relative to the instance file>
//   [vehicles]
//   vehicle <id> <start_node> <capacity>
//   [requests]
//   request <id> <origin> <destination> <pickup_time_s>
//
// Request ids are assigned 0..n-1 in pickup-time order; vehicle ids 0..m-1.

#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "darp/travel_time_matrix.hpp"
#include "darp/types.hpp"

namespace darp {

struct Request {
  RequestId id = 0;
  NodeId origin = 0;
  NodeId destination = 0;
  Seconds pickup_time = 0;  // seconds since the instance epoch
  Seconds direct_time = 0;  // cached f_t(origin, destination)
  bool operator==(const Request&) const = default;
};

struct Vehicle {
  VehicleId id = 0;
  NodeId start = 0;
  std::uint32_t capacity = 0;
  bool operator==(const Vehicle&) const = default;
};

struct InstanceConfig {
  std::string area;
  std::string epoch_iso;  // ISO-8601 UTC, e.g. 2022-04-05T18:00:00Z
  Seconds duration_s = 0;
  Seconds max_delay_s = 0;
  std::uint64_t seed = 0;
  std::string matrix_file;
  bool operator==(const InstanceConfig&) const = default;
};

struct Instance {
  InstanceConfig config;
  std::vector<Vehicle> vehicles;
  std::vector<Request> requests;  // sorted by pickup_time, id == position
  std::shared_ptr<const TravelTimeMatrix> matrix;

  Seconds travel(NodeId from, NodeId to) const { return matrix->at(from, to); }

  const Request& request(RequestId id) const { return requests.at(id); }
  const Vehicle& vehicle(VehicleId id) const { return vehicles.at(id); }
};

// Accepts "YYYY-MM-DDTHH:MM:SS", a space instead of 'T', an optional
// trailing 'Z', or a plain integer (unix seconds). Times are UTC.
inline std::int64_t parse_iso8601(const std::string& s) {
  if (!s.empty() && s.find_first_not_of("0123456789") == std::string::npos)
    return static_cast<std::int64_t>(std::stoull(s));
  std::string t = s;
  if (!t.empty() && t.back() == 'Z') t.pop_back();
  auto sep = t.find(' ');
  if (sep != std::string::npos) t[sep] = 'T';
  std::tm tm{};
  if (::strptime(t.c_str(), "%Y-%m-%dT%H:%M:%S", &tm) == nullptr)
    throw ParseError("bad timestamp '" + s + "'");
  return static_cast<std::int64_t>(::timegm(&tm));
}

inline std::string format_iso8601(std::int64_t unix_seconds) {
  std::time_t t = static_cast<std::time_t>(unix_seconds);
  std::tm tm{};
  ::gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Checks every Instance invariant; throws ValidationError on the first
// violation found.
inline void validate_instance(const Instance& inst) {
  if (!inst.matrix) throw ValidationError("instance has no travel-time matrix");
  if (inst.config.max_delay_s == 0) throw ValidationError("max delay must be positive");
  if (inst.config.duration_s == 0) throw ValidationError("duration must be positive");
  for (std::size_t i = 0; i < inst.vehicles.size(); ++i) {
    const Vehicle& v = inst.vehicles[i];
    if (v.id != i) throw ValidationError("vehicle ids must be 0..m-1 in order");
    if (v.capacity < 1)
      throw ValidationError("vehicle " + std::to_string(v.id) + " has zero capacity");
    if (!inst.matrix->has_node(v.start))
      throw ValidationError("vehicle " + std::to_string(v.id) +
                            " starts at unknown node " + std::to_string(v.start));
  }
  for (std::size_t i = 0; i < inst.requests.size(); ++i) {
    const Request& r = inst.requests[i];
    if (r.id != i) throw ValidationError("request ids must be 0..n-1 in order");
    if (i > 0 && r.pickup_time < inst.requests[i - 1].pickup_time)
      throw ValidationError("requests not sorted by pickup time at id " +
                            std::to_string(r.id));
    if (r.origin == r.destination)
      throw ValidationError("request " + std::to_string(r.id) +
                            " has origin == destination");
    if (r.pickup_time >= inst.config.duration_s)
      throw ValidationError("request " + std::to_string(r.id) +
                            " pickup time outside instance duration");
    if (!inst.matrix->has_node(r.origin) || !inst.matrix->has_node(r.destination))
      throw ValidationError("request " + std::to_string(r.id) +
                            " references node absent from matrix index");
    if (r.direct_time != inst.travel(r.origin, r.destination))
      throw ValidationError("request " + std::to_string(r.id) +
                            " cached direct time does not match matrix");
  }
}

inline void write_instance(const Instance& inst, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write instance file " + path.string());
  out << "[config]\n";
  out << "area = " << inst.config.area << "\n";
  out << "epoch = " << inst.config.epoch_iso << "\n";
  out << "duration_s = " << inst.config.duration_s << "\n";
  out << "max_delay_s = " << inst.config.max_delay_s << "\n";
  out << "seed = " << inst.config.seed << "\n";
  out << "matrix_file = " << inst.config.matrix_file << "\n";
  out << "[vehicles]\n";
  for (const Vehicle& v : inst.vehicles)
    out << "vehicle " << v.id << " " << v.start << " " << v.capacity << "\n";
  out << "[requests]\n";
  for (const Request& r : inst.requests)
    out << "request " << r.id << " " << r.origin << " " << r.destination << " "
        << r.pickup_time << "\n";
  if (!out) throw IoError("write failed for " + path.string());
}

inline Instance read_instance(const std::filesystem::path& path,
                              std::shared_ptr<const TravelTimeMatrix> matrix = nullptr) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open instance file " + path.string());

  Instance inst;
  enum class Section { none, config, vehicles, requests } section = Section::none;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::blank_or_comment(line)) continue;
    if (line == "[config]") {
      section = Section::config;
      continue;
    }
    if (line == "[vehicles]") {
      section = Section::vehicles;
      continue;
    }
    if (line == "[requests]") {
      section = Section::requests;
      continue;
    }
    std::istringstream ls(line);
    switch (section) {
      case Section::config: {
        std::string key, eq, value;
        ls >> key >> eq;
        std::getline(ls, value);
        const auto first = value.find_first_not_of(' ');
        value = first == std::string::npos ? "" : value.substr(first);
        if (eq != "=") detail::parse_fail(path, lineno, "expected 'key = value'");
        if (key == "area")
          inst.config.area = value;
        else if (key == "epoch")
          inst.config.epoch_iso = value;
        else if (key == "duration_s")
          inst.config.duration_s = std::stoull(value);
        else if (key == "max_delay_s")
          inst.config.max_delay_s = std::stoull(value);
        else if (key == "seed")
          inst.config.seed = std::stoull(value);
        else if (key == "matrix_file")
          inst.config.matrix_file = value;
        else
          detail::parse_fail(path, lineno, "unknown config key '" + key + "'");
        break;
      }
      case Section::vehicles: {
        std::string tag;
        Vehicle v;
        if (!(ls >> tag >> v.id >> v.start >> v.capacity) || tag != "vehicle")
          detail::parse_fail(path, lineno, "bad vehicle line");
        inst.vehicles.push_back(v);
        break;
      }
      case Section::requests: {
        std::string tag;
        Request r;
        if (!(ls >> tag >> r.id >> r.origin >> r.destination >> r.pickup_time) ||
            tag != "request")
          detail::parse_fail(path, lineno, "bad request line");
        inst.requests.push_back(r);
        break;
      }
      case Section::none:
        detail::parse_fail(path, lineno, "content before any section header");
    }
  }

  if (matrix) {
    inst.matrix = std::move(matrix);
  } else {
    if (inst.config.matrix_file.empty())
      throw ParseError(path.string() + ": missing matrix_file in [config]");
    std::filesystem::path mpath(inst.config.matrix_file);
    if (mpath.is_relative()) mpath = path.parent_path() / mpath;
    inst.matrix = std::make_shared<TravelTimeMatrix>(read_matrix(mpath));
  }
  // Parse the epoch eagerly so a bad timestamp fails at read time.
  parse_iso8601(inst.config.epoch_iso);
  for (Request& r : inst.requests) {
    if (!inst.matrix->has_node(r.origin) || !inst.matrix->has_node(r.destination))
      throw ValidationError(path.string() + ": request " + std::to_string(r.id) +
                            " references node absent from matrix index");
    r.direct_time = inst.travel(r.origin, r.destination);
  }
  validate_instance(inst);
  return inst;
}

}  // namespace darp
