#pragma once

// Dense all-pairs travel-time matrix over a strongly connected road graph.
// Binary file layout: magic "DTTM", node count as u64 LE, the node-id index
// (u64 LE each), then row-major u32 LE travel times in seconds.

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <queue>
#include <thread>
#include <unordered_map>
#include <vector>

#include "darp/road_graph.hpp"
#include "darp/types.hpp"

namespace darp {

class TravelTimeMatrix {
 public:
  TravelTimeMatrix() = default;

  TravelTimeMatrix(std::vector<NodeId> ids, std::vector<std::uint32_t> data)
      : ids_(std::move(ids)), data_(std::move(data)) {
    if (data_.size() != ids_.size() * ids_.size())
      throw ValidationError("matrix data size does not match index");
    for (std::size_t i = 0; i < ids_.size(); ++i) {
      if (!pos_.emplace(ids_[i], i).second)
        throw ValidationError("duplicate node id in matrix index");
      if (data_[i * ids_.size() + i] != 0)
        throw ValidationError("matrix diagonal entry is not zero");
    }
  }

  std::size_t size() const { return ids_.size(); }
  const std::vector<NodeId>& node_ids() const { return ids_; }
  const std::vector<std::uint32_t>& data() const { return data_; }
  bool has_node(NodeId id) const { return pos_.count(id) > 0; }

  std::size_t index_of(NodeId id) const {
    auto it = pos_.find(id);
    if (it == pos_.end())
      throw ValidationError("node id " + std::to_string(id) + " not in matrix index");
    return it->second;
  }

  std::uint32_t at_index(std::size_t from, std::size_t to) const {
    return data_[from * ids_.size() + to];
  }

  std::uint32_t at(NodeId from, NodeId to) const {
    return at_index(index_of(from), index_of(to));
  }

  bool operator==(const TravelTimeMatrix& other) const {
    return ids_ == other.ids_ && data_ == other.data_;
  }

 private:
  std::vector<NodeId> ids_;
  std::unordered_map<NodeId, std::size_t> pos_;
  std::vector<std::uint32_t> data_;
};

// f_t lookup.
inline Seconds travel_time(const TravelTimeMatrix& m, NodeId from, NodeId to) {
  return m.at(from, to);
}

// One Dijkstra per source node; sources are distributed over threads
// (threads == 0 picks hardware concurrency). Rows are independent, so the
// result does not depend on the thread count. Throws if any node pair is
// unreachable, i.e. the graph is not strongly connected.
inline TravelTimeMatrix compute_travel_time_matrix(const RoadGraph& graph,
                                                   unsigned threads = 0) {
  const std::size_t n = graph.node_count();
  if (n == 0) throw ValidationError("cannot build matrix of empty graph");

  // CSR adjacency.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> arcs;  // (target, time)
  std::vector<std::size_t> head(n + 1, 0);
  for (const RoadEdge& e : graph.edges()) ++head[graph.node_index(e.from) + 1];
  for (std::size_t i = 0; i < n; ++i) head[i + 1] += head[i];
  arcs.resize(graph.edge_count());
  {
    std::vector<std::size_t> fill(head.begin(), head.end() - 1);
    for (const RoadEdge& e : graph.edges()) {
      if (e.time_s > std::numeric_limits<std::uint32_t>::max())
        throw ValidationError("edge travel time exceeds 32-bit range");
      arcs[fill[graph.node_index(e.from)]++] = {
          static_cast<std::uint32_t>(graph.node_index(e.to)),
          static_cast<std::uint32_t>(e.time_s)};
    }
  }

  std::vector<std::uint32_t> data(n * n);
  constexpr std::uint64_t kInf = std::numeric_limits<std::uint64_t>::max();

  auto run_sources = [&](std::size_t begin, std::size_t end, bool& ok) {
    std::vector<std::uint64_t> dist(n);
    using Item = std::pair<std::uint64_t, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    for (std::size_t s = begin; s < end; ++s) {
      std::fill(dist.begin(), dist.end(), kInf);
      dist[s] = 0;
      heap.push({0, static_cast<std::uint32_t>(s)});
      while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (d != dist[u]) continue;
        for (std::size_t a = head[u]; a < head[u + 1]; ++a) {
          const std::uint64_t nd = d + arcs[a].second;
          if (nd < dist[arcs[a].first]) {
            dist[arcs[a].first] = nd;
            heap.push({nd, arcs[a].first});
          }
        }
      }
      for (std::size_t t = 0; t < n; ++t) {
        if (dist[t] == kInf || dist[t] > std::numeric_limits<std::uint32_t>::max()) {
          ok = false;
          return;
        }
        data[s * n + t] = static_cast<std::uint32_t>(dist[t]);
      }
    }
  };

  unsigned nthreads = threads == 0 ? std::thread::hardware_concurrency() : threads;
  if (nthreads == 0) nthreads = 1;
  nthreads = std::min<unsigned>(nthreads, static_cast<unsigned>(n));

  std::vector<char> ok_flags(nthreads, 1);
  if (nthreads == 1) {
    bool ok = true;
    run_sources(0, n, ok);
    ok_flags[0] = ok;
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + nthreads - 1) / nthreads;
    for (unsigned t = 0; t < nthreads; ++t) {
      const std::size_t b = t * chunk, e = std::min(n, b + chunk);
      pool.emplace_back([&, t, b, e] {
        bool ok = true;
        run_sources(b, e, ok);
        ok_flags[t] = ok;
      });
    }
    for (auto& th : pool) th.join();
  }
  for (char ok : ok_flags)
    if (!ok)
      throw ValidationError(
          "graph is not strongly connected; run filter_largest_scc first");

  std::vector<NodeId> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = graph.nodes()[i].id;
  return TravelTimeMatrix(std::move(ids), std::move(data));
}

namespace detail {

inline void put_u64_le(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 8);
}

inline void put_u32_le(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 4);
}

inline std::uint64_t get_u64_le(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

inline std::uint32_t get_u32_le(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

}  // namespace detail

inline void write_matrix(const TravelTimeMatrix& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write matrix file " + path.string());
  out.write("DTTM", 4);
  detail::put_u64_le(out, m.size());
  for (NodeId id : m.node_ids()) detail::put_u64_le(out, id);
  const auto& data = m.data();
  std::vector<char> buf;
  buf.reserve(data.size() * 4);
  for (std::uint32_t v : data)
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

inline TravelTimeMatrix read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open matrix file " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "DTTM", 4) != 0)
    throw ParseError(path.string() + ": bad matrix magic");
  const std::uint64_t n = detail::get_u64_le(in);
  if (!in) throw ParseError(path.string() + ": truncated matrix header");
  std::vector<NodeId> ids(n);
  for (std::uint64_t i = 0; i < n; ++i) ids[i] = detail::get_u64_le(in);
  std::vector<std::uint32_t> data(n * n);
  for (std::uint64_t i = 0; i < n * n; ++i) data[i] = detail::get_u32_le(in);
  if (!in) throw ParseError(path.string() + ": truncated matrix data");
  in.peek();
  if (!in.eof()) throw ParseError(path.string() + ": trailing bytes after matrix data");
  return TravelTimeMatrix(std::move(ids), std::move(data));
}

}  // namespace darp
