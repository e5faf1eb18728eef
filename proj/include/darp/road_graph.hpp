#pragma once

// Directed road network and the preprocessing passes that turn a raw graph
// into the solver-ready travel-time model: speed assignment, pass-through
// node contraction and largest-SCC filtering.
//
// Graph file format (UTF-8, line oriented, '#' starts a comment line):
//   nodes <count>
//   node <id> [<lat> <lon>]
//   edges <count>
//   edge <from> <to> <length_m> <speed_mps>
//
// Speed table file:
//   default <speed_mps>
//   <from> <to> <speed_mps>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "darp/types.hpp"

namespace darp {

struct LatLon {
  double lat = 0.0;
  double lon = 0.0;
  bool operator==(const LatLon&) const = default;
};

struct RoadNode {
  NodeId id = 0;
  std::optional<LatLon> coord;  // display metadata, never used in computation
  bool operator==(const RoadNode&) const = default;
};

struct RoadEdge {
  NodeId from = 0;
  NodeId to = 0;
  double length_m = 0.0;
  double speed_mps = 0.0;
  Seconds time_s = 0;
  bool operator==(const RoadEdge&) const = default;
};

// Whole seconds, rounded up so no edge is free to traverse.
inline Seconds edge_travel_time(double length_m, double speed_mps) {
  const auto t = static_cast<Seconds>(std::ceil(length_m / speed_mps));
  return t < 1 ? 1 : t;
}

class RoadGraph {
 public:
  RoadGraph() = default;

  // Validates endpoints, positive lengths/speeds and positive travel times.
  // Nodes are kept sorted by id, edges by (from, to); construction from any
  // input ordering yields the same graph.
  RoadGraph(std::vector<RoadNode> nodes, std::vector<RoadEdge> edges)
      : nodes_(std::move(nodes)), edges_(std::move(edges)) {
    std::sort(nodes_.begin(), nodes_.end(),
              [](const RoadNode& a, const RoadNode& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (i > 0 && nodes_[i].id == nodes_[i - 1].id)
        throw ValidationError("duplicate node id " + std::to_string(nodes_[i].id));
      index_[nodes_[i].id] = i;
    }
    std::sort(edges_.begin(), edges_.end(), [](const RoadEdge& a, const RoadEdge& b) {
      return std::tie(a.from, a.to, a.time_s, a.length_m) <
             std::tie(b.from, b.to, b.time_s, b.length_m);
    });
    for (const RoadEdge& e : edges_) {
      if (!has_node(e.from) || !has_node(e.to))
        throw ValidationError("edge (" + std::to_string(e.from) + "," +
                              std::to_string(e.to) + ") references unknown node");
      if (!(e.length_m > 0.0))
        throw ValidationError("edge (" + std::to_string(e.from) + "," +
                              std::to_string(e.to) + ") has non-positive length");
      if (!(e.speed_mps > 0.0))
        throw ValidationError("edge (" + std::to_string(e.from) + "," +
                              std::to_string(e.to) + ") has non-positive speed");
      if (e.time_s < 1)
        throw ValidationError("edge (" + std::to_string(e.from) + "," +
                              std::to_string(e.to) + ") has zero travel time");
    }
  }

  const std::vector<RoadNode>& nodes() const { return nodes_; }
  const std::vector<RoadEdge>& edges() const { return edges_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool has_node(NodeId id) const { return index_.count(id) > 0; }

  std::size_t node_index(NodeId id) const {
    auto it = index_.find(id);
    if (it == index_.end())
      throw ValidationError("unknown node id " + std::to_string(id));
    return it->second;
  }

  bool operator==(const RoadGraph& other) const {
    return nodes_ == other.nodes_ && edges_ == other.edges_;
  }

 private:
  std::vector<RoadNode> nodes_;
  std::vector<RoadEdge> edges_;
  std::unordered_map<NodeId, std::size_t> index_;
};

struct SpeedTable {
  double default_speed_mps = 0.0;
  std::map<std::pair<NodeId, NodeId>, double> overrides;
};

namespace detail {

inline bool blank_or_comment(const std::string& line) {
  for (char c : line) {
    if (c == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

[[noreturn]] inline void parse_fail(const std::filesystem::path& path, std::size_t lineno,
                                    const std::string& what) {
  throw ParseError(path.string() + ":" + std::to_string(lineno) + ": " + what);
}

}  // namespace detail

inline RoadGraph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open graph file " + path.string());

  std::vector<RoadNode> nodes;
  std::vector<RoadEdge> edges;
  std::unordered_map<NodeId, bool> seen;
  std::size_t lineno = 0;
  std::size_t expect_nodes = 0, expect_edges = 0;
  bool have_nodes_header = false, have_edges_header = false;

  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::blank_or_comment(line)) continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "nodes") {
      if (!(ls >> expect_nodes)) detail::parse_fail(path, lineno, "bad nodes header");
      have_nodes_header = true;
    } else if (tag == "node") {
      if (!have_nodes_header) detail::parse_fail(path, lineno, "node before nodes header");
      RoadNode n;
      if (!(ls >> n.id)) detail::parse_fail(path, lineno, "bad node line");
      double lat, lon;
      if (ls >> lat) {
        if (!(ls >> lon)) detail::parse_fail(path, lineno, "node has lat but no lon");
        n.coord = LatLon{lat, lon};
      }
      if (seen.count(n.id)) detail::parse_fail(path, lineno, "duplicate node id");
      seen[n.id] = true;
      nodes.push_back(n);
    } else if (tag == "edges") {
      if (!(ls >> expect_edges)) detail::parse_fail(path, lineno, "bad edges header");
      have_edges_header = true;
    } else if (tag == "edge") {
      if (!have_edges_header) detail::parse_fail(path, lineno, "edge before edges header");
      RoadEdge e;
      if (!(ls >> e.from >> e.to >> e.length_m >> e.speed_mps))
        detail::parse_fail(path, lineno, "bad edge line");
      if (!seen.count(e.from))
        detail::parse_fail(path, lineno, "edge references undefined node " + std::to_string(e.from));
      if (!seen.count(e.to))
        detail::parse_fail(path, lineno, "edge references undefined node " + std::to_string(e.to));
      if (!(e.length_m > 0.0) || !(e.speed_mps > 0.0))
        throw ValidationError(path.string() + ":" + std::to_string(lineno) +
                              ": non-positive length or speed");
      e.time_s = edge_travel_time(e.length_m, e.speed_mps);
      edges.push_back(e);
    } else {
      detail::parse_fail(path, lineno, "unknown line tag '" + tag + "'");
    }
  }
  if (!have_nodes_header) throw ParseError(path.string() + ": missing nodes header");
  if (nodes.size() != expect_nodes)
    throw ParseError(path.string() + ": nodes header says " + std::to_string(expect_nodes) +
                     " but file has " + std::to_string(nodes.size()));
  if (have_edges_header && edges.size() != expect_edges)
    throw ParseError(path.string() + ": edges header says " + std::to_string(expect_edges) +
                     " but file has " + std::to_string(edges.size()));
  return RoadGraph(std::move(nodes), std::move(edges));
}

inline SpeedTable load_speed_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open speed table " + path.string());
  SpeedTable table;
  bool have_default = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::blank_or_comment(line)) continue;
    std::istringstream ls(line);
    std::string first;
    ls >> first;
    if (first == "default") {
      if (!(ls >> table.default_speed_mps))
        detail::parse_fail(path, lineno, "bad default speed");
      have_default = true;
    } else {
      NodeId from, to;
      double speed;
      std::istringstream again(line);
      if (!(again >> from >> to >> speed))
        detail::parse_fail(path, lineno, "bad speed line");
      if (!(speed > 0.0))
        throw ValidationError(path.string() + ":" + std::to_string(lineno) +
                              ": non-positive speed");
      table.overrides[{from, to}] = speed;
    }
  }
  if (!have_default) throw ParseError(path.string() + ": missing default speed line");
  if (!(table.default_speed_mps > 0.0))
    throw ValidationError(path.string() + ": non-positive default speed");
  return table;
}

// Replaces each edge's speed with the table entry when present, the default
// otherwise, and recomputes travel times.
inline RoadGraph assign_speeds(const RoadGraph& graph, const SpeedTable& speeds) {
  if (!(speeds.default_speed_mps > 0.0))
    throw ValidationError("speed table default must be positive");
  std::vector<RoadEdge> edges = graph.edges();
  for (RoadEdge& e : edges) {
    auto it = speeds.overrides.find({e.from, e.to});
    e.speed_mps = (it != speeds.overrides.end()) ? it->second : speeds.default_speed_mps;
    e.time_s = edge_travel_time(e.length_m, e.speed_mps);
  }
  return RoadGraph(graph.nodes(), std::move(edges));
}

// Removes pass-through nodes: a node with exactly one in-edge (a->b) and one
// out-edge (b->c), a != c, or the symmetric two-way pattern a<->b<->c.
// Replacement edges carry the sum of the constituent times and lengths, so
// shortest-path times between retained nodes are unchanged. Nodes touching
// self-loops and any other degree pattern are retained. Parallel edges
// produced by a contraction are merged keeping the minimum-time edge.
inline RoadGraph contract_passthrough(const RoadGraph& graph) {
  const std::size_t n = graph.node_count();
  struct WorkEdge {
    NodeId from, to;
    double length_m;
    Seconds time_s;
    bool alive = true;
  };
  std::vector<WorkEdge> edges;
  edges.reserve(graph.edge_count());
  for (const RoadEdge& e : graph.edges())
    edges.push_back({e.from, e.to, e.length_m, e.time_s});

  std::vector<std::vector<std::size_t>> out(n), in(n);
  for (std::size_t ei = 0; ei < edges.size(); ++ei) {
    out[graph.node_index(edges[ei].from)].push_back(ei);
    in[graph.node_index(edges[ei].to)].push_back(ei);
  }
  std::vector<bool> node_alive(n, true);

  auto alive_list = [&](const std::vector<std::size_t>& lst) {
    std::vector<std::size_t> r;
    for (std::size_t ei : lst)
      if (edges[ei].alive) r.push_back(ei);
    return r;
  };

  // Adds a->c; if an a->c edge already exists, keeps the faster one.
  auto add_edge = [&](NodeId a, NodeId c, double length, Seconds time) {
    const std::size_t ai = graph.node_index(a);
    for (std::size_t ei : out[ai]) {
      if (!edges[ei].alive || edges[ei].to != c) continue;
      if (time < edges[ei].time_s) {
        edges[ei].time_s = time;
        edges[ei].length_m = length;
      }
      return;
    }
    edges.push_back({a, c, length, time});
    out[ai].push_back(edges.size() - 1);
    in[graph.node_index(c)].push_back(edges.size() - 1);
  };

  std::vector<std::size_t> queue(n);
  for (std::size_t i = 0; i < n; ++i) queue[i] = i;
  std::vector<bool> queued(n, true);

  std::size_t qh = 0;
  while (qh < queue.size()) {
    const std::size_t bi = queue[qh++];
    queued[bi] = false;
    if (!node_alive[bi]) continue;
    const NodeId b = graph.nodes()[bi].id;

    const auto ins = alive_list(in[bi]);
    const auto outs = alive_list(out[bi]);
    bool self_loop = false;
    for (std::size_t ei : ins)
      if (edges[ei].from == b) self_loop = true;
    for (std::size_t ei : outs)
      if (edges[ei].to == b) self_loop = true;
    if (self_loop) continue;

    NodeId a = 0, c = 0;
    bool contract = false, two_way = false;
    if (ins.size() == 1 && outs.size() == 1) {
      a = edges[ins[0]].from;
      c = edges[outs[0]].to;
      contract = (a != c);
    } else if (ins.size() == 2 && outs.size() == 2) {
      // Two-way chain: in {x->b, y->b}, out {b->x, b->y} with x != y.
      const NodeId x = edges[ins[0]].from, y = edges[ins[1]].from;
      const NodeId ox = edges[outs[0]].to, oy = edges[outs[1]].to;
      if (x != y && ((ox == x && oy == y) || (ox == y && oy == x))) {
        a = x;
        c = y;
        contract = true;
        two_way = true;
      }
    }
    if (!contract) continue;

    auto edge_between = [&](NodeId u, NodeId v, const std::vector<std::size_t>& lst,
                            bool by_from) -> const WorkEdge& {
      for (std::size_t ei : lst) {
        const WorkEdge& e = edges[ei];
        if (by_from ? e.from == u : e.to == v) return e;
      }
      throw ValidationError("contraction bookkeeping error");  // unreachable
    };

    if (!two_way) {
      const WorkEdge& ab = edges[ins[0]];
      const WorkEdge& bc = edges[outs[0]];
      const double len = ab.length_m + bc.length_m;
      const Seconds t = ab.time_s + bc.time_s;
      edges[ins[0]].alive = false;
      edges[outs[0]].alive = false;
      add_edge(a, c, len, t);
    } else {
      const WorkEdge ab = edge_between(a, b, ins, true);
      const WorkEdge cb = edge_between(c, b, ins, true);
      const WorkEdge ba = edge_between(b, a, outs, false);
      const WorkEdge bc = edge_between(b, c, outs, false);
      for (std::size_t ei : ins) edges[ei].alive = false;
      for (std::size_t ei : outs) edges[ei].alive = false;
      add_edge(a, c, ab.length_m + bc.length_m, ab.time_s + bc.time_s);
      add_edge(c, a, cb.length_m + ba.length_m, cb.time_s + ba.time_s);
    }
    node_alive[bi] = false;
    for (NodeId nb : {a, c}) {
      const std::size_t ni = graph.node_index(nb);
      if (!queued[ni]) {
        queued[ni] = true;
        queue.push_back(ni);
      }
    }
  }

  std::vector<RoadNode> kept_nodes;
  for (std::size_t i = 0; i < n; ++i)
    if (node_alive[i]) kept_nodes.push_back(graph.nodes()[i]);
  std::vector<RoadEdge> kept_edges;
  for (const WorkEdge& e : edges) {
    if (!e.alive) continue;
    // Merged edges get a synthetic average speed; travel time stays exact.
    kept_edges.push_back({e.from, e.to, e.length_m,
                          e.length_m / static_cast<double>(e.time_s), e.time_s});
  }
  return RoadGraph(std::move(kept_nodes), std::move(kept_edges));
}

// Induced subgraph on the largest strongly-connected component. Ties are
// broken toward the component containing the smallest node id.
inline RoadGraph filter_largest_scc(const RoadGraph& graph) {
  const std::size_t n = graph.node_count();
  if (n == 0) throw ValidationError("filter_largest_scc: empty graph");

  std::vector<std::vector<std::size_t>> adj(n);
  for (const RoadEdge& e : graph.edges())
    adj[graph.node_index(e.from)].push_back(graph.node_index(e.to));

  // Iterative Tarjan.
  constexpr std::size_t kUnvisited = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> index(n, kUnvisited), low(n), comp(n, kUnvisited);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::size_t next_index = 0, next_comp = 0;

  struct Frame {
    std::size_t v;
    std::size_t child = 0;
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    std::vector<Frame> frames{{root}};
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.child < adj[f.v].size()) {
        const std::size_t w = adj[f.v][f.child++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
      } else {
        if (low[f.v] == index[f.v]) {
          while (true) {
            const std::size_t w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            comp[w] = next_comp;
            if (w == f.v) break;
          }
          ++next_comp;
        }
        const std::size_t v = f.v;
        frames.pop_back();
        if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      }
    }
  }

  std::vector<std::size_t> comp_size(next_comp, 0);
  std::vector<NodeId> comp_min_id(next_comp, std::numeric_limits<NodeId>::max());
  for (std::size_t i = 0; i < n; ++i) {
    ++comp_size[comp[i]];
    comp_min_id[comp[i]] = std::min(comp_min_id[comp[i]], graph.nodes()[i].id);
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < next_comp; ++c) {
    if (comp_size[c] > comp_size[best] ||
        (comp_size[c] == comp_size[best] && comp_min_id[c] < comp_min_id[best]))
      best = c;
  }

  std::vector<RoadNode> kept_nodes;
  for (std::size_t i = 0; i < n; ++i)
    if (comp[i] == best) kept_nodes.push_back(graph.nodes()[i]);
  std::vector<RoadEdge> kept_edges;
  for (const RoadEdge& e : graph.edges())
    if (comp[graph.node_index(e.from)] == best && comp[graph.node_index(e.to)] == best)
      kept_edges.push_back(e);
  return RoadGraph(std::move(kept_nodes), std::move(kept_edges));
}

}  // namespace darp
