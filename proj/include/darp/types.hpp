#pragma once

// Shared id types, error types and the deterministic RNG used across the
// library.

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace darp {

using NodeId = std::uint64_t;
using ZoneId = std::uint64_t;
using RequestId = std::uint32_t;
using VehicleId = std::uint32_t;
using Seconds = std::uint64_t;

// Malformed input file (bad syntax, unknown reference).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Structurally well-formed data that violates a documented invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A solver could not produce a solution (e.g. no feasible insertion).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// mt19937_64 plus a hand-rolled bounded draw. The engine is fully specified
// by the standard; std::uniform_int_distribution is not, and generated files
// must be byte-identical for a given seed regardless of toolchain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform draw from [0, n), bias-free via rejection.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below: empty range");
    const std::uint64_t threshold = (-n) % n;  // 2^64 mod n
    std::uint64_t v;
    do {
      v = engine_();
    } while (v < threshold);
    return v % n;
  }

  // Uniform draw from [lo, hi).
  std::uint64_t in_range(std::uint64_t lo, std::uint64_t hi) {
    if (lo >= hi) throw std::invalid_argument("Rng::in_range: empty interval");
    return lo + below(hi - lo);
  }

  // Fisher-Yates, driven by below() so the permutation is seed-stable.
  template <class T>
  void shuffle(std::vector<T>& xs) {
    for (std::size_t i = xs.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(xs[i - 1], xs[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Outcome vocabulary shared by solvers and the benchmark harness. A run that
// hits its time limit with an incumbent in hand reports `feasible`; `timeout`
// means the limit expired with nothing to show.
enum class SolveStatus : std::uint8_t { optimal, feasible, timeout, error };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::feasible: return "feasible";
    case SolveStatus::timeout: return "timeout";
    case SolveStatus::error: return "error";
  }
  return "error";
}

}  // namespace darp
