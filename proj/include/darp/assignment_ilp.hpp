#pragma once

// Exact 0/1 set-partitioning solver layer.
//
//   minimize   sum cost[j] * x[j]
//   subject to sum over columns covering row r of x[j] == 1, for every row
//              x binary
//
// IlpBackend is the pluggable exact-solver interface; BranchAndBoundBackend
// is the built-in default: LP-relaxation bounds from the revised simplex,
// best-bound node order, most-fractional branching, ties to the lowest
// column index. Node LPs are seeded from the incumbent partition, and root
// duals drive reduced-cost fixing: a column whose root reduced cost already
// exceeds the incumbent gap cannot appear in any improving partition and is
// dropped from every later node. Costs are integers, so a node whose LP
// bound exceeds incumbent - 1 (plus tolerance) cannot contain an improvement
// and is pruned; incumbents are re-verified in exact integer arithmetic
// before acceptance, so LP round-off can never certify a wrong optimum.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <memory>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "darp/simplex.hpp"
#include "darp/types.hpp"

namespace darp {

struct IlpModel {
  int rows = 0;
  std::vector<Seconds> cost;               // per column
  std::vector<std::vector<int>> col_rows;  // rows covered by each column
};

enum class IlpStatus {
  optimal,     // proven
  feasible,    // time limit hit with an incumbent in hand
  timeout,     // time limit hit, no incumbent
  infeasible,  // no partition exists
};

struct IlpSolution {
  IlpStatus status = IlpStatus::timeout;
  std::vector<int> chosen;  // selected column indices, ascending
  Seconds objective = 0;
  std::uint64_t nodes = 0;  // branch-and-bound nodes processed
};

struct IlpOptions {
  double time_limit_s = 0.0;        // <= 0: no limit
  std::vector<int> warm_start;      // optional feasible partition (column ids)
};

class IlpBackend {
 public:
  virtual ~IlpBackend() = default;
  virtual IlpSolution solve(const IlpModel& model, const IlpOptions& opts) = 0;
  virtual std::string name() const = 0;
};

namespace detail {

inline void check_model(const IlpModel& model) {
  if (model.cost.size() != model.col_rows.size())
    throw std::invalid_argument("ilp: cost/column count mismatch");
  for (const auto& rows : model.col_rows) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i] < 0 || rows[i] >= model.rows)
        throw std::invalid_argument("ilp: column covers row out of range");
      if (i > 0 && rows[i] <= rows[i - 1])
        throw std::invalid_argument("ilp: column rows must be ascending and unique");
    }
  }
}

// Exact integer check that a column set is a partition of all rows.
inline bool is_partition(const IlpModel& model, const std::vector<int>& cols) {
  std::vector<int> hits(model.rows, 0);
  for (int j : cols) {
    if (j < 0 || j >= static_cast<int>(model.col_rows.size())) return false;
    for (int r : model.col_rows[j]) ++hits[r];
  }
  for (int h : hits)
    if (h != 1) return false;
  return true;
}

inline Seconds exact_objective(const IlpModel& model, const std::vector<int>& cols) {
  Seconds s = 0;
  for (int j : cols) s += model.cost[j];
  return s;
}

}  // namespace detail

class BranchAndBoundBackend : public IlpBackend {
 public:
  std::string name() const override { return "branch-and-bound"; }

  IlpSolution solve(const IlpModel& model, const IlpOptions& opts) override {
    detail::check_model(model);
    const auto start = std::chrono::steady_clock::now();
    const int ncols = static_cast<int>(model.cost.size());

    IlpSolution best;
    best.status = IlpStatus::timeout;
    bool have_incumbent = false;
    Seconds incumbent = 0;
    std::vector<int> incumbent_cols;

    if (!opts.warm_start.empty()) {
      if (!detail::is_partition(model, opts.warm_start))
        throw std::invalid_argument("ilp: warm start is not a partition");
      incumbent_cols = opts.warm_start;
      std::sort(incumbent_cols.begin(), incumbent_cols.end());
      incumbent = detail::exact_objective(model, incumbent_cols);
      have_incumbent = true;
    }

    if (model.rows == 0) {
      best.status = IlpStatus::optimal;
      best.objective = 0;
      best.chosen = {};
      return best;
    }

    struct Node {
      double bound;
      std::uint64_t id;
      std::vector<int> fixed_one;   // original column ids
      std::vector<int> fixed_zero;  // original column ids
      std::vector<int> hot;         // parent's LP basis, original column ids
      std::vector<std::pair<int, int>> together;  // row pairs forced into one column
      std::vector<std::pair<int, int>> apart;     // row pairs kept in separate columns
    };
    struct NodeOrder {
      bool operator()(const Node& a, const Node& b) const {
        if (a.bound != b.bound) return a.bound > b.bound;  // min-heap by bound
        return a.id > b.id;
      }
    };
    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    std::uint64_t next_id = 0;
    open.push({-std::numeric_limits<double>::infinity(), next_id++, {}, {}, {}, {}, {}});

    const auto out_of_time = [&]() {
      if (opts.time_limit_s <= 0.0) return false;
      const std::chrono::duration<double> el = std::chrono::steady_clock::now() - start;
      return el.count() >= opts.time_limit_s;
    };
    // Strictly better integer solutions cost <= incumbent - 1.
    const auto cutoff = [&]() {
      return have_incumbent ? static_cast<double>(incumbent) - 1.0 + 1e-3
                            : std::numeric_limits<double>::infinity();
    };

    std::vector<bool> fixed0(ncols), covered(model.rows);
    std::vector<int> row_map(model.rows);

    // Reduced-cost fixing. With root duals y, any integer solution using
    // column j costs at least root_bound + rc_j (every column has x <= 1
    // because it covers a unit-rhs row), so columns beyond the incumbent
    // gap are dead. The margin absorbs LP tolerances; refreshed whenever
    // the incumbent improves.
    std::vector<double> root_rc;
    double root_bound = 0.0;
    std::vector<bool> rc_fixed(ncols, false);
    const auto refresh_rc_fixing = [&]() {
      if (root_rc.empty() || !have_incumbent) return;
      const double limit = cutoff() + 0.5;
      for (int j = 0; j < ncols; ++j)
        if (!rc_fixed[j] && !model.col_rows[j].empty() &&
            root_bound + std::max(root_rc[j], 0.0) > limit)
          rc_fixed[j] = true;
      long live = 0;
      for (int j = 0; j < ncols; ++j)
        if (!rc_fixed[j]) ++live;
      std::fprintf(stderr, "[rcfix] live=%ld of %d\n", live, ncols);
    };

    // Columns covering each row, cheapest first; feeds the rounding
    // heuristic's completion pass.
    std::vector<std::vector<int>> row_cols(model.rows);
    for (int j = 0; j < ncols; ++j)
      for (int r : model.col_rows[j]) row_cols[r].push_back(j);
    for (auto& list : row_cols)
      std::sort(list.begin(), list.end(), [&](int a, int b) {
        if (model.cost[a] != model.cost[b]) return model.cost[a] < model.cost[b];
        return a < b;
      });

    // A node's feasible columns are a filtered view of the model: covered
    // rows drop out, as do fixed-zero, reduced-cost-fixed, covered-row-
    // touching columns, and columns breaking a together/apart row-pair
    // decision. prepare() loads a node's filter state into the shared
    // scratch; alive() and relax() read that state, so they must run while
    // it is still current.
    struct Prep {
      bool conflict = false;   // fixed-one columns overlap
      bool dead_row = false;   // some row has no remaining column
      Seconds fixed_cost = 0;
      int nrows = 0;
    };
    std::vector<std::pair<int, int>> cur_together, cur_apart;
    const auto covers = [&](int j, int r) {
      const auto& rows = model.col_rows[j];
      return std::binary_search(rows.begin(), rows.end(), r);
    };
    const auto alive = [&](int j) {
      if (fixed0[j] || rc_fixed[j]) return false;
      for (int r : model.col_rows[j])
        if (covered[r]) return false;
      for (const auto& [a, b] : cur_together)
        if (covers(j, a) != covers(j, b)) return false;
      for (const auto& [a, b] : cur_apart)
        if (covers(j, a) && covers(j, b)) return false;
      return true;
    };
    const auto prepare = [&](const std::vector<int>& fixed_one,
                             const std::vector<int>& fixed_zero,
                             const std::vector<std::pair<int, int>>& together,
                             const std::vector<std::pair<int, int>>& apart) {
      Prep out;
      std::fill(fixed0.begin(), fixed0.end(), false);
      std::fill(covered.begin(), covered.end(), false);
      cur_together = together;
      cur_apart = apart;
      for (int j : fixed_zero) fixed0[j] = true;
      for (int j : fixed_one) {
        out.fixed_cost += model.cost[j];
        for (int r : model.col_rows[j]) {
          if (covered[r]) out.conflict = true;
          covered[r] = true;
        }
      }
      if (out.conflict) return out;
      for (int r = 0; r < model.rows; ++r) row_map[r] = covered[r] ? -1 : out.nrows++;
      for (int r = 0; r < model.rows && !out.dead_row; ++r) {
        if (covered[r]) continue;
        bool ok = false;
        for (int j : row_cols[r])
          if (alive(j)) {
            ok = true;
            break;
          }
        if (!ok) out.dead_row = true;
      }
      return out;
    };

    // Maps original column ids into LP positions, dropping ones not present.
    const auto map_ids = [](const std::vector<int>& ids, const std::vector<int>& lp_cols) {
      std::vector<int> out;
      out.reserve(ids.size());
      for (int j : ids) {
        const auto it = std::lower_bound(lp_cols.begin(), lp_cols.end(), j);
        if (it != lp_cols.end() && *it == j)
          out.push_back(static_cast<int>(it - lp_cols.begin()));
      }
      return out;
    };

    // Structural half of an LP basis, translated back to original ids.
    const auto basis_ids = [](const LpResult& rel, const std::vector<int>& lp_cols) {
      std::vector<int> out;
      out.reserve(rel.basis.size());
      for (int b : rel.basis)
        if (b >= 0 && b < static_cast<int>(lp_cols.size())) out.push_back(lp_cols[b]);
      std::sort(out.begin(), out.end());
      return out;
    };

    // Node relaxation by sifting over the live view: only the working set
    // is ever materialized. The set starts from the parent basis, the
    // incumbent, and a few cheapest live columns per row; each round prices
    // every live column with the subset duals and admits the violators
    // until the subset optimum is optimal for the whole node (or certifies
    // its infeasibility through phase-1 pricing).
    struct Relaxed {
      LpResult rel;
      std::vector<int> lp_cols;  // original id per LP column, ascending
    };
    const auto relax = [&](const Prep& prep, const std::vector<int>& hot) {
      static constexpr int kPerRow = 8;
      static constexpr int kAddCap = 20000;
      Relaxed out;
      std::vector<char> in_w(ncols, 0);
      std::vector<int> seed_ids;
      const auto admit = [&](int j) {
        if (!in_w[j] && alive(j)) {
          in_w[j] = 1;
          return true;
        }
        return false;
      };
      for (int j : hot)
        if (admit(j)) seed_ids.push_back(j);
      if (have_incumbent)
        for (int j : incumbent_cols)
          if (admit(j)) seed_ids.push_back(j);
      for (int r = 0; r < model.rows; ++r) {
        if (covered[r]) continue;
        int kept = 0;
        for (int j : row_cols[r]) {
          if (!alive(j)) continue;
          admit(j);
          if (++kept >= kPerRow) break;
        }
      }
      std::vector<int>& W = out.lp_cols;
      for (int j = 0; j < ncols; ++j)
        if (in_w[j]) W.push_back(j);

      for (int round = 0; round < 60; ++round) {
        LpProblem sub;
        sub.rows = prep.nrows;
        sub.rhs.assign(prep.nrows, 1.0);
        sub.cost.reserve(W.size());
        sub.cols.reserve(W.size());
        for (int j : W) {
          SparseCol col;
          for (int r : model.col_rows[j]) col.entries.push_back({row_map[r], 1.0});
          sub.cols.push_back(std::move(col));
          sub.cost.push_back(static_cast<double>(model.cost[j]));
        }
        LpResult r = solve_lp(sub, map_ids(seed_ids, W));
        if (r.status != LpStatus::optimal && r.status != LpStatus::infeasible) {
          r.x.clear();
          out.rel = std::move(r);
          return out;
        }
        const bool phase1 = r.status == LpStatus::infeasible;
        std::vector<std::pair<double, int>> violated;
        for (int j = 0; j < ncols; ++j) {
          if (in_w[j] || !alive(j)) continue;
          double dot = 0.0;
          for (int rr : model.col_rows[j]) dot += r.y[row_map[rr]];
          const double rc = (phase1 ? 0.0 : static_cast<double>(model.cost[j])) - dot;
          if (rc < -1e-7) violated.push_back({rc, j});
        }
        if (violated.empty()) {
          out.rel = std::move(r);
          return out;
        }
        const int subn = static_cast<int>(W.size());
        seed_ids.clear();
        for (int b : r.basis)
          if (b >= 0 && b < subn) seed_ids.push_back(W[b]);
        const std::size_t take = std::min<std::size_t>(violated.size(), kAddCap);
        std::partial_sort(violated.begin(), violated.begin() + take, violated.end());
        std::vector<int> added;
        added.reserve(take);
        for (std::size_t i = 0; i < take; ++i) {
          in_w[violated[i].second] = 1;
          added.push_back(violated[i].second);
        }
        std::sort(added.begin(), added.end());
        const std::size_t split = W.size();
        W.insert(W.end(), added.begin(), added.end());
        std::inplace_merge(W.begin(), W.begin() + split, W.end());
      }
      throw SolverError("ilp: node relaxation failed to converge");
    };

    const auto offer_incumbent = [&](std::vector<int> cols) {
      std::sort(cols.begin(), cols.end());
      if (!detail::is_partition(model, cols)) return;
      const Seconds obj = detail::exact_objective(model, cols);
      if (have_incumbent && obj >= incumbent) return;
      have_incumbent = true;
      incumbent = obj;
      incumbent_cols = std::move(cols);
      refresh_rc_fixing();
      std::fprintf(stderr, "[inc] nodes=%llu obj=%llu\n",
                   (unsigned long long)best.nodes, (unsigned long long)incumbent);
    };

    // Rounding: keep the LP point's partition-compatible support, largest
    // values first, then complete row by row with the cheapest compatible
    // column. Successes are exact incumbents via offer_incumbent.
    const auto round_from = [&](const std::vector<double>& x,
                                const std::vector<int>& lp_cols,
                                const std::vector<int>& base) {
      std::vector<std::pair<double, int>> support;
      for (std::size_t k = 0; k < x.size(); ++k)
        if (x[k] > 1e-6) support.push_back({-x[k], static_cast<int>(k)});
      std::sort(support.begin(), support.end());
      std::vector<bool> taken(model.rows, false);
      std::vector<int> picked = base;
      for (int j : base)
        for (int r : model.col_rows[j]) taken[r] = true;
      for (auto [negx, k] : support) {
        const int j = lp_cols[k];
        bool free = true;
        for (int r : model.col_rows[j])
          if (taken[r]) {
            free = false;
            break;
          }
        if (!free) continue;
        for (int r : model.col_rows[j]) taken[r] = true;
        picked.push_back(j);
      }
      for (int r = 0; r < model.rows; ++r) {
        if (taken[r]) continue;
        bool filled = false;
        int walk = 0;
        for (int j : row_cols[r]) {
          if (++walk > 20000) break;
          if (rc_fixed[j]) continue;
          bool free = true;
          for (int rr : model.col_rows[j])
            if (taken[rr]) {
              free = false;
              break;
            }
          if (!free) continue;
          for (int rr : model.col_rows[j]) taken[rr] = true;
          picked.push_back(j);
          filled = true;
          break;
        }
        if (!filled) return;
      }
      offer_incumbent(std::move(picked));
    };

    // Packing start: widest columns first, cheaper first within a width,
    // claim whatever fits. After one pass over every column an uncovered
    // row cannot be repaired by any single remaining column, so the claim
    // set is offered as-is and judged by the exact partition check. Runs
    // before any LP so the very first nodes already prune against a cutoff.
    const auto pack_start = [&]() {
      std::vector<int> order;
      order.reserve(ncols);
      for (int j = 0; j < ncols; ++j)
        if (!model.col_rows[j].empty()) order.push_back(j);
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (model.col_rows[a].size() != model.col_rows[b].size())
          return model.col_rows[a].size() > model.col_rows[b].size();
        if (model.cost[a] != model.cost[b]) return model.cost[a] < model.cost[b];
        return a < b;
      });
      std::vector<bool> taken(model.rows, false);
      std::vector<int> picked;
      for (int j : order) {
        bool free = true;
        for (int r : model.col_rows[j])
          if (taken[r]) {
            free = false;
            break;
          }
        if (!free) continue;
        for (int r : model.col_rows[j]) taken[r] = true;
        picked.push_back(j);
      }
      offer_incumbent(std::move(picked));
    };

    // Dive from the root relaxation: fix every near-one column plus the
    // most fractional-valued one, re-solve the shrunken relaxation, repeat;
    // a pick whose remainder goes infeasible is banned and the next
    // candidate tried. Dive bounds are never reused; the sole product is an
    // early exact incumbent so pruning and reduced-cost fixing start
    // working while the tree is still narrow.
    const std::vector<std::pair<int, int>> no_pairs;
    const auto dive = [&](LpResult rel, std::vector<int> lp_cols) {
      std::vector<int> path, banned;
      int setbacks = 0;
      for (int step = 0; step < model.rows + 30; ++step) {
        if (out_of_time()) return;
        const std::vector<int> hot = basis_ids(rel, lp_cols);
        const std::size_t before = path.size();
        std::vector<std::pair<double, int>> cand;  // fractional support, by value
        for (std::size_t k = 0; k < rel.x.size(); ++k) {
          const double v = rel.x[k];
          if (v > 0.999)
            path.push_back(lp_cols[k]);
          else if (v > 1e-6)
            cand.push_back({-v, static_cast<int>(k)});
        }
        std::sort(cand.begin(), cand.end());
        bool advanced = false;
        for (std::size_t ci = 0; ci <= cand.size() && !advanced; ++ci) {
          const bool with_pick = ci < cand.size();
          if (with_pick)
            path.push_back(lp_cols[cand[ci].second]);
          else if (path.size() == before)
            return;  // no near-ones and every candidate failed
          const Prep b = prepare(path, banned, no_pairs, no_pairs);
          bool bad = b.conflict || b.dead_row;
          if (!bad && b.nrows == 0) {
            offer_incumbent(std::move(path));
            return;
          }
          Relaxed next;
          if (!bad) {
            next = relax(b, hot);
            if (next.rel.status == LpStatus::infeasible)
              bad = true;
            else if (next.rel.status != LpStatus::optimal)
              return;
          }
          if (bad) {
            if (!with_pick) return;  // the near-one batch itself is a dead end
            banned.push_back(path.back());
            path.pop_back();
            if (++setbacks > 25) return;
            continue;
          }
          bool fractional = false;
          for (double v : next.rel.x)
            if (v > 1e-6 && v < 1.0 - 1e-6) {
              fractional = true;
              break;
            }
          if (!fractional) {
            std::vector<int> cols = path;
            for (std::size_t k = 0; k < next.rel.x.size(); ++k)
              if (next.rel.x[k] > 0.5) cols.push_back(next.lp_cols[k]);
            offer_incumbent(std::move(cols));
            return;
          }
          round_from(next.rel.x, next.lp_cols, path);
          rel = std::move(next.rel);
          lp_cols = std::move(next.lp_cols);
          advanced = true;
        }
        if (!advanced) return;
      }
    };

    // Support polish: an exact solve over just the columns the root
    // relaxation uses, plus the incumbent and a cheap cover per row. The
    // restriction is small enough to finish fast, and any partition it
    // finds is a real incumbent for the full model.
    const auto polish = [&](const LpResult& rel, const std::vector<int>& lp_cols) {
      if (ncols <= 20000 || out_of_time()) return;
      std::vector<char> take(ncols, 0);
      for (std::size_t k = 0; k < rel.x.size(); ++k)
        if (rel.x[k] > 1e-9) take[lp_cols[k]] = 1;
      for (int j : incumbent_cols) take[j] = 1;
      for (int r = 0; r < model.rows; ++r) {
        int kept = 0;
        for (int j : row_cols[r]) {
          take[j] = 1;
          if (++kept >= 6) break;
        }
      }
      IlpModel sub;
      sub.rows = model.rows;
      std::vector<int> ids;
      for (int j = 0; j < ncols; ++j)
        if (take[j]) {
          ids.push_back(j);
          sub.cost.push_back(model.cost[j]);
          sub.col_rows.push_back(model.col_rows[j]);
        }
      IlpOptions sub_opts;
      sub_opts.time_limit_s = 60.0;
      if (opts.time_limit_s > 0.0) {
        const std::chrono::duration<double> el = std::chrono::steady_clock::now() - start;
        sub_opts.time_limit_s = std::min(60.0, (opts.time_limit_s - el.count()) / 2.0);
        if (sub_opts.time_limit_s <= 1.0) return;
      }
      if (have_incumbent) sub_opts.warm_start = map_ids(incumbent_cols, ids);
      BranchAndBoundBackend inner;
      const IlpSolution polished = inner.solve(sub, sub_opts);
      if (polished.status == IlpStatus::optimal || polished.status == IlpStatus::feasible) {
        std::vector<int> cols;
        cols.reserve(polished.chosen.size());
        for (int k : polished.chosen) cols.push_back(ids[k]);
        offer_incumbent(std::move(cols));
      }
    };

    pack_start();

    while (!open.empty()) {
      if (out_of_time()) break;
      // Bound-based finish: nothing left can beat the incumbent by a whole
      // unit, so the incumbent is optimal.
      if (have_incumbent && open.top().bound > cutoff()) {
        open = {};
        break;
      }
      Node node = open.top();
      open.pop();

      // Plunge: expand the constrained child in place and park the sibling,
      // so every selected node drills down to an integral, infeasible, or
      // dominated point instead of widening a frontier of near-equal
      // bounds. Best-bound selection resumes when the plunge bottoms out.
      bool plunging = true;
      while (plunging) {
        plunging = false;
        if (out_of_time()) break;
        ++best.nodes;
        if (best.nodes % 25 == 0)
          std::fprintf(stderr, "[bb] nodes=%llu open=%zu bound=%.1f\n",
                       (unsigned long long)best.nodes, open.size(), node.bound);

        const Prep built = prepare(node.fixed_one, node.fixed_zero, node.together, node.apart);
        if (built.conflict || built.dead_row) break;
        if (built.nrows == 0) {
          // Fixed-one columns alone cover every row.
          offer_incumbent(node.fixed_one);
          break;
        }
        Relaxed rx = relax(built, node.hot);
        const LpResult& rel = rx.rel;
        const std::vector<int>& lp_cols = rx.lp_cols;
        if (rel.status == LpStatus::infeasible) break;
        if (rel.status != LpStatus::optimal)
          throw SolverError("ilp: LP relaxation failed to solve");
        const double bound = static_cast<double>(built.fixed_cost) + rel.objective;
        const bool at_root = node.fixed_one.empty() && node.fixed_zero.empty() &&
                             node.together.empty() && node.apart.empty();
        if (at_root && root_rc.empty() && !rel.y.empty()) {
          root_bound = bound;
          root_rc.resize(ncols);
          for (int j = 0; j < ncols; ++j) {
            double dot = 0.0;
            for (int r : model.col_rows[j]) dot += rel.y[r];
            root_rc[j] = static_cast<double>(model.cost[j]) - dot;
          }
          refresh_rc_fixing();
        }
        if (bound > cutoff()) break;

        // Integral relaxation: a candidate incumbent, verified exactly.
        int branch_col = -1;
        double branch_frac = 2.0;
        for (std::size_t k = 0; k < rel.x.size(); ++k) {
          const double v = rel.x[k];
          if (v > 1e-6 && v < 1.0 - 1e-6) {
            const double dist = std::fabs(v - 0.5);
            if (dist < branch_frac - 1e-12) {
              branch_frac = dist;
              branch_col = static_cast<int>(k);
            }
          }
        }
        if (branch_col < 0) {
          std::vector<int> cols = node.fixed_one;
          for (std::size_t k = 0; k < rel.x.size(); ++k)
            if (rel.x[k] > 0.5) cols.push_back(lp_cols[k]);
          std::sort(cols.begin(), cols.end());
          if (detail::is_partition(model, cols)) {
            const Seconds obj = detail::exact_objective(model, cols);
            if (!have_incumbent || obj < incumbent) {
              have_incumbent = true;
              incumbent = obj;
              incumbent_cols = std::move(cols);
              refresh_rc_fixing();
            }
            break;
          }
          // Near-integral LP point that is not an exact partition: a numeric
          // artifact. Branch on the first selected column instead of trusting it.
          for (std::size_t k = 0; k < rel.x.size() && branch_col < 0; ++k)
            if (rel.x[k] > 0.5) branch_col = static_cast<int>(k);
          if (branch_col < 0) break;
        }

        round_from(rel.x, lp_cols, node.fixed_one);
        if (at_root) {
          dive(rel, lp_cols);
          polish(rel, lp_cols);
        }
        if (bound > cutoff()) break;

        // Branch on the row pair with the most fractional joint coverage:
        // one child forces the rows into a single column, the other keeps
        // them apart. Both children stay set-partitioning problems and the
        // split is balanced, unlike fixing a single column to 0, which
        // barely changes the relaxation. Falls back to column branching for
        // the rare fractional point with no usable pair.
        int br_a = -1, br_b = -1;
        {
          std::map<std::pair<int, int>, double> joint;
          for (std::size_t k = 0; k < rel.x.size(); ++k) {
            const double v = rel.x[k];
            if (v <= 1e-6) continue;
            const auto& rows = model.col_rows[lp_cols[k]];
            for (std::size_t i = 0; i < rows.size(); ++i)
              for (std::size_t i2 = i + 1; i2 < rows.size(); ++i2)
                joint[{rows[i], rows[i2]}] += v;
          }
          double best_dist = 0.5 - 1e-6;
          for (const auto& [pr, t] : joint) {
            const double dist = std::fabs(t - 0.5);
            if (dist < best_dist - 1e-12) {
              best_dist = dist;
              br_a = pr.first;
              br_b = pr.second;
            }
          }
        }

        std::vector<int> hot = basis_ids(rel, lp_cols);
        Node one{bound, next_id++, node.fixed_one, node.fixed_zero, hot, node.together,
                 node.apart};
        Node zero{bound, next_id++, node.fixed_one, node.fixed_zero, std::move(hot),
                  node.together, node.apart};
        if (br_a >= 0) {
          one.together.push_back({br_a, br_b});
          zero.apart.push_back({br_a, br_b});
        } else {
          const int orig = lp_cols[branch_col];
          one.fixed_one.push_back(orig);
          zero.fixed_zero.push_back(orig);
        }
        open.push(std::move(zero));
        node = std::move(one);
        plunging = true;
      }
    }

    if (!open.empty()) {
      // Stopped on the clock.
      if (have_incumbent) {
        best.status = IlpStatus::feasible;
        best.chosen = incumbent_cols;
        best.objective = incumbent;
      } else {
        best.status = IlpStatus::timeout;
      }
      return best;
    }
    if (have_incumbent) {
      best.status = IlpStatus::optimal;
      best.chosen = incumbent_cols;
      best.objective = incumbent;
    } else {
      best.status = IlpStatus::infeasible;
    }
    return best;
  }
};

inline std::unique_ptr<IlpBackend> make_default_backend() {
  return std::make_unique<BranchAndBoundBackend>();
}

}  // namespace darp
