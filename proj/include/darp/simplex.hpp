#pragma once

// Revised primal simplex for standard-form LPs:
//   minimize c'x  subject to  Ax = b, x >= 0,  b >= 0.
// Two phases with artificial variables, dense basis inverse, Devex pricing
// with a Bland fallback after a degenerate streak, periodic refactorization.
// An optional basis seed (e.g. a known feasible partition) starts phase 2
// directly from that vertex. Sized for set-partitioning relaxations: a few
// hundred rows, sparse 0/1 columns, many columns; solve_lp_sifted handles
// the many-column end by pricing over a growing working set. Deterministic:
// ties always break to the lowest column index.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "darp/types.hpp"

namespace darp {

struct SparseCol {
  std::vector<std::pair<int, double>> entries;  // (row, coefficient), rows ascending
};

struct LpProblem {
  int rows = 0;
  std::vector<double> cost;      // per column
  std::vector<SparseCol> cols;   // per column
  std::vector<double> rhs;       // size rows, nonnegative
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

struct LpResult {
  LpStatus status = LpStatus::iteration_limit;
  double objective = 0.0;
  std::vector<double> x;   // structural columns only
  std::vector<double> y;   // row duals at the final basis; phase-1 duals if infeasible
  std::vector<int> basis;  // final basis by row; id >= column count marks an artificial
  long iterations = 0;     // pivots over both phases
};

class RevisedSimplex {
 public:
  explicit RevisedSimplex(const LpProblem& p)
      : m_(p.rows), n_(static_cast<int>(p.cols.size())), cols_(p.cols), cost2_(p.cost),
        rhs_(p.rhs) {
    if (static_cast<int>(rhs_.size()) != m_)
      throw std::invalid_argument("rhs size does not match row count");
    if (cost2_.size() != cols_.size())
      throw std::invalid_argument("cost size does not match column count");
    for (double b : rhs_)
      if (b < 0.0) throw std::invalid_argument("rhs must be nonnegative");
    for (const SparseCol& c : cols_)
      for (auto [r, v] : c.entries) {
        if (r < 0 || r >= m_) throw std::invalid_argument("column entry row out of range");
        (void)v;
      }
  }

  LpResult solve(long iter_limit = 0) { return solve(std::vector<int>(), iter_limit); }

  // `seed` proposes structural columns for the starting basis: independent
  // ones each claim a pivot row, artificials fill the rest. A seed whose
  // vertex already satisfies Ax = b (e.g. a feasible partition) makes
  // phase 1 a no-op.
  LpResult solve(const std::vector<int>& seed, long iter_limit = 0) {
    LpResult res = solve_impl(seed, iter_limit);
    res.iterations = iters_;
    res.basis = basis_;
    return res;
  }

 private:
  LpResult solve_impl(const std::vector<int>& seed, long iter_limit) {
    if (iter_limit <= 0) iter_limit = 2000 + 40L * (m_ + n_);
    LpResult res;
    if (m_ == 0) {
      // No constraints: every x = 0 is optimal for c >= 0; a negative cost
      // makes the LP unbounded.
      for (double c : cost2_)
        if (c < -kTol) {
          res.status = LpStatus::unbounded;
          return res;
        }
      res.status = LpStatus::optimal;
      res.x.assign(n_, 0.0);
      return res;
    }

    seed_basis(seed);
    devex_.assign(n_, 1.0);

    phase1_ = true;
    bool artificials_live = false;
    for (int r = 0; r < m_ && !artificials_live; ++r)
      if (basis_[r] >= n_ && xb_[r] > kFeasTol) artificials_live = true;
    if (artificials_live) {
      apply_perturbation(true);
      LpStatus s1 = iterate(iter_limit);
      if (pert_active_) {
        pert_active_ = false;
        recompute_xb();
      }
      if (s1 == LpStatus::optimal) {
        // The nudge can leave a residue that masks the true phase-1
        // verdict; settle it on the real rhs. A restore that breaks primal
        // feasibility outright forces a cold unperturbed restart instead.
        double minxb = 0.0;
        for (double v : xb_) minxb = std::min(minxb, v);
        if (minxb < -kFeasTol) {
          artificial_start();
          devex_.assign(n_, 1.0);
          s1 = iterate(iter_limit);
        } else if (phase_objective() > kFeasTol) {
          devex_.assign(n_, 1.0);
          s1 = iterate(iter_limit);
        }
      }
      if (s1 != LpStatus::optimal) {
        if (s1 == LpStatus::iteration_limit)
          std::fprintf(stderr, "[lp] phase1 limit m=%d n=%d iters=%ld seedrows=%d\n", m_, n_,
                       iters_, seeded_rows_);
        res.status = s1;
        return res;
      }
      if (phase_objective() > kFeasTol) {
        // Phase-1 duals, so callers can price columns by how much residual
        // infeasibility they could absorb.
        btran_costs(res.y);
        res.status = LpStatus::infeasible;
        return res;
      }
    }
    drive_out_artificials();
    phase1_ = false;
    devex_.assign(n_, 1.0);
    apply_perturbation(false);
    const LpStatus s2 = iterate(iter_limit);
    if (pert_active_) {
      pert_active_ = false;
      recompute_xb();
    }
    res.status = s2;
    if (s2 == LpStatus::iteration_limit)
      std::fprintf(stderr, "[lp] phase2 limit m=%d n=%d iters=%ld seedrows=%d\n", m_, n_,
                   iters_, seeded_rows_);
    if (s2 != LpStatus::optimal) return res;

    // Objective through the duals: c_B' B^-1 b is identical to the basic
    // solution's cost and immune to the clamping recompute_xb applies.
    btran_costs(res.y);
    double obj = 0.0;
    for (int r = 0; r < m_; ++r) obj += res.y[r] * rhs_[r];
    res.objective = obj;
    res.x.assign(n_, 0.0);
    for (int r = 0; r < m_; ++r)
      if (basis_[r] < n_) res.x[basis_[r]] = std::max(xb_[r], 0.0);
    return res;
  }

 private:
  static constexpr double kTol = 1e-7;      // reduced-cost / value tolerance
  static constexpr double kPivTol = 1e-9;   // minimum pivot magnitude
  static constexpr double kFeasTol = 1e-6;  // phase-1 residual tolerance
  static constexpr double kDevexReset = 1e8;  // weight ceiling before a reset
  static constexpr double kPertScale = 1e-5;  // phase-2 rhs nudge magnitude
  static constexpr int kRefactorEvery = 64;
  static constexpr int kBlandAfter = 80;    // degenerate pivots before Bland

  int m_, n_;
  std::vector<SparseCol> cols_;
  std::vector<double> cost2_;  // phase-2 costs
  std::vector<double> rhs_;
  std::vector<int> basis_;     // internal column per row; >= n_ means artificial
  std::vector<double> binv_;   // row-major m x m
  std::vector<double> xb_;
  std::vector<double> devex_;  // reference weight per structural column
  std::vector<double> pert_;   // additive rhs perturbation while active
  bool pert_active_ = false;
  bool phase1_ = true;
  long iters_ = 0;
  int seeded_rows_ = 0;

  double& binv_at(int r, int c) { return binv_[static_cast<std::size_t>(r) * m_ + c]; }
  double binv_at(int r, int c) const { return binv_[static_cast<std::size_t>(r) * m_ + c]; }

  double col_cost(int j) const {
    if (phase1_) return j >= n_ ? 1.0 : 0.0;
    return j >= n_ ? 0.0 : cost2_[j];
  }

  double phase_objective() const {
    double s = 0.0;
    for (int r = 0; r < m_; ++r)
      if (basis_[r] >= n_) s += xb_[r];
    return s;
  }

  // d = B^-1 * A_j
  void ftran(int j, std::vector<double>& d) const {
    d.assign(m_, 0.0);
    if (j >= n_) {
      const int row = j - n_;
      for (int r = 0; r < m_; ++r) d[r] = binv_at(r, row);
      return;
    }
    for (auto [row, v] : cols_[j].entries)
      for (int r = 0; r < m_; ++r) d[r] += binv_at(r, row) * v;
  }

  // y = c_B' * B^-1
  void btran_costs(std::vector<double>& y) const {
    y.assign(m_, 0.0);
    for (int r = 0; r < m_; ++r) {
      const double cb = col_cost(basis_[r]);
      if (cb == 0.0) continue;
      for (int k = 0; k < m_; ++k) y[k] += cb * binv_at(r, k);
    }
  }

  double reduced_cost(int j, const std::vector<double>& y) const {
    double dot = 0.0;
    for (auto [row, v] : cols_[j].entries) dot += y[row] * v;
    return col_cost(j) - dot;
  }

  // All-artificial identity start: B = I, xb = b.
  void artificial_start() {
    basis_.resize(m_);
    for (int r = 0; r < m_; ++r) basis_[r] = n_ + r;
    binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int r = 0; r < m_; ++r) binv_at(r, r) = 1.0;
    xb_ = rhs_;
  }

  // Installs the starting basis. Gaussian elimination over the seed columns
  // picks an independent subset and a pivot row for each; artificials fill
  // the remaining rows. Any unusable seed falls back to the all-artificial
  // identity start.
  void seed_basis(const std::vector<int>& seed) {
    basis_.resize(m_);
    std::vector<std::vector<double>> work;
    std::vector<int> keep;
    work.reserve(seed.size());
    for (int j : seed) {
      if (j < 0 || j >= n_) continue;
      std::vector<double> col(m_, 0.0);
      for (auto [row, v] : cols_[j].entries) col[row] = v;
      work.push_back(std::move(col));
      keep.push_back(j);
    }
    if (work.empty()) {
      artificial_start();
      return;
    }
    std::fill(basis_.begin(), basis_.end(), -1);
    std::vector<char> used(m_, 0);
    bool any = false;
    for (std::size_t k = 0; k < work.size(); ++k) {
      int pr = -1;
      double pv = kPivTol;
      for (int r = 0; r < m_; ++r)
        if (!used[r] && std::fabs(work[k][r]) > pv) {
          pv = std::fabs(work[k][r]);
          pr = r;
        }
      if (pr < 0) continue;  // dependent on earlier seed columns
      used[pr] = 1;
      basis_[pr] = keep[k];
      any = true;
      for (std::size_t k2 = k + 1; k2 < work.size(); ++k2) {
        const double f = work[k2][pr] / work[k][pr];
        if (f == 0.0) continue;
        for (int r = 0; r < m_; ++r) work[k2][r] -= f * work[k][r];
      }
    }
    if (!any) {
      artificial_start();
      return;
    }
    for (int r = 0; r < m_; ++r)
      if (basis_[r] < 0) basis_[r] = n_ + r;
    else ++seeded_rows_;
    refactorize();
    for (double v : xb_)
      if (v < 0.0) {
        // The seeded vertex is not primal feasible; start over instead.
        artificial_start();
        return;
      }
  }

  void refactorize() {
    // Gauss-Jordan inverse of the basis matrix with partial pivoting.
    std::vector<double> a(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int r = 0; r < m_; ++r) {
      const int j = basis_[r];
      if (j >= n_)
        a[static_cast<std::size_t>(j - n_) * m_ + r] = 1.0;
      else
        for (auto [row, v] : cols_[j].entries)
          a[static_cast<std::size_t>(row) * m_ + r] = v;
    }
    std::vector<double> inv(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int r = 0; r < m_; ++r) inv[static_cast<std::size_t>(r) * m_ + r] = 1.0;
    auto A = [&](int r, int c) -> double& { return a[static_cast<std::size_t>(r) * m_ + c]; };
    auto I = [&](int r, int c) -> double& { return inv[static_cast<std::size_t>(r) * m_ + c]; };
    for (int col = 0; col < m_; ++col) {
      int piv = col;
      for (int r = col + 1; r < m_; ++r)
        if (std::fabs(A(r, col)) > std::fabs(A(piv, col))) piv = r;
      if (std::fabs(A(piv, col)) < kPivTol) throw SolverError("simplex: singular basis");
      if (piv != col)
        for (int c = 0; c < m_; ++c) {
          std::swap(A(piv, c), A(col, c));
          std::swap(I(piv, c), I(col, c));
        }
      const double p = A(col, col);
      for (int c = 0; c < m_; ++c) {
        A(col, c) /= p;
        I(col, c) /= p;
      }
      for (int r = 0; r < m_; ++r) {
        if (r == col) continue;
        const double f = A(r, col);
        if (f == 0.0) continue;
        for (int c = 0; c < m_; ++c) {
          A(r, c) -= f * A(col, c);
          I(r, c) -= f * I(col, c);
        }
      }
    }
    binv_ = std::move(inv);
    recompute_xb();
  }

  void recompute_xb() {
    xb_.assign(m_, 0.0);
    for (int r = 0; r < m_; ++r)
      for (int k = 0; k < m_; ++k) {
        const double b = pert_active_ ? rhs_[k] + pert_[k] : rhs_[k];
        xb_[r] += binv_at(r, k) * b;
      }
    for (double& v : xb_)
      if (v < 0.0 && v > -kFeasTol) v = 0.0;
  }

  // Degeneracy guard. Stalling comes from basic variables stuck at zero;
  // nudging the rhs along the current basis columns starts every perturbed
  // basic strictly positive, so pivots make real progress. The nudge is
  // deterministic and withdrawn before results are read, and the reduced
  // costs that certify optimality never involve the rhs at all. Phase 2
  // leaves artificial slots alone: their lock at zero is what keeps them
  // from creeping back in.
  void apply_perturbation(bool include_artificials) {
    pert_.assign(m_, 0.0);
    pert_active_ = false;
    for (int r = 0; r < m_; ++r) {
      const int j = basis_[r];
      const double eps = kPertScale * (1.0 + pert_mix(r));
      if (j >= n_) {
        if (!include_artificials) continue;
        pert_[j - n_] += eps;
      } else {
        for (auto [row, v] : cols_[j].entries) pert_[row] += eps * v;
      }
      xb_[r] += eps;
      pert_active_ = true;
    }
  }

  // Deterministic row-indexed mixing in [0, 1), splitmix64 finalizer.
  static double pert_mix(int r) {
    std::uint64_t z = static_cast<std::uint64_t>(r) + 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return static_cast<double>((z ^ (z >> 31)) & 0xffff) / 65536.0;
  }

  // After phase 1, pivot still-basic artificials out wherever a structural
  // column has a usable pivot element in their row. Rows with no such column
  // are redundant; their artificial stays, locked at zero.
  void drive_out_artificials() {
    std::vector<bool> is_basic(static_cast<std::size_t>(n_) + m_, false);
    for (int r = 0; r < m_; ++r) is_basic[basis_[r]] = true;
    std::vector<double> d;
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] < n_) continue;
      int enter = -1;
      for (int j = 0; j < n_ && enter < 0; ++j) {
        if (is_basic[j]) continue;
        double val = 0.0;
        for (auto [row, v] : cols_[j].entries) val += binv_at(r, row) * v;
        if (std::fabs(val) > kTol) enter = j;
      }
      if (enter < 0) continue;
      ftran(enter, d);
      if (std::fabs(d[r]) < kPivTol) continue;
      is_basic[basis_[r]] = false;
      is_basic[enter] = true;
      pivot(enter, r, d, 0.0);
    }
  }

  void pivot(int enter, int leave_row, const std::vector<double>& d, double theta) {
    for (int r = 0; r < m_; ++r) {
      if (r == leave_row) continue;
      xb_[r] -= theta * d[r];
      if (xb_[r] < 0.0 && xb_[r] > -kFeasTol) xb_[r] = 0.0;
    }
    xb_[leave_row] = theta;
    const double piv = d[leave_row];
    double* lr = &binv_[static_cast<std::size_t>(leave_row) * m_];
    for (int c = 0; c < m_; ++c) lr[c] /= piv;
    for (int r = 0; r < m_; ++r) {
      if (r == leave_row) continue;
      const double f = d[r];
      if (f == 0.0) continue;
      double* rr = &binv_[static_cast<std::size_t>(r) * m_];
      for (int c = 0; c < m_; ++c) rr[c] -= f * lr[c];
    }
    basis_[leave_row] = enter;
  }

  LpStatus iterate(long iter_limit) {
    std::vector<double> y, d;
    std::vector<bool> is_basic(static_cast<std::size_t>(n_) + m_, false);
    for (int r = 0; r < m_; ++r) is_basic[basis_[r]] = true;
    int since_refactor = 0;
    int degenerate_streak = 0;

    for (long it = 0; it < iter_limit; ++it) {
      ++iters_;
      btran_costs(y);
      const bool bland = degenerate_streak >= kBlandAfter;
      int enter = -1;
      double best_score = 0.0;
      for (int j = 0; j < n_; ++j) {
        if (is_basic[j]) continue;
        const double rc = reduced_cost(j, y);
        if (rc >= -kTol) continue;
        if (bland) {
          enter = j;
          break;
        }
        // Devex: improvement per unit step length in the reference frame.
        const double score = rc * rc / devex_[j];
        if (score > best_score) {
          best_score = score;
          enter = j;
        }
      }
      // Artificials never re-enter: once nonbasic they stay dropped at zero.
      // The phase-1 zero-vs-positive verdict is unaffected by that restriction.
      if (enter < 0) return LpStatus::optimal;

      ftran(enter, d);
      // Ratio test. Basic artificials are capped at zero in phase 2: a
      // direction that would grow one forces it out at step 0.
      int leave = -1;
      double theta = std::numeric_limits<double>::infinity();
      for (int r = 0; r < m_; ++r) {
        const bool art = basis_[r] >= n_;
        if (d[r] > kPivTol) {
          const double t = xb_[r] / d[r];
          if (t < theta - 1e-12 ||
              (t < theta + 1e-12 && (leave < 0 || basis_[r] < basis_[leave]))) {
            theta = t;
            leave = r;
          }
        } else if (!phase1_ && art && d[r] < -kPivTol && xb_[r] <= kFeasTol) {
          if (0.0 < theta - 1e-12 || (leave < 0 || basis_[r] < basis_[leave])) {
            theta = 0.0;
            leave = r;
          }
        }
      }
      if (leave < 0) return LpStatus::unbounded;
      if (theta < kTol)
        ++degenerate_streak;
      else
        degenerate_streak = 0;

      update_devex(enter, leave, d, is_basic);
      is_basic[basis_[leave]] = false;
      is_basic[enter] = true;
      pivot(enter, leave, d, theta);

      if (++since_refactor >= kRefactorEvery) {
        refactorize();
        since_refactor = 0;
      }
    }
    return LpStatus::iteration_limit;
  }

  // Devex reference weights (simplified Forrest-Goldfarb): approximate
  // steepest-edge norms, updated from the outgoing pivot row before the
  // basis changes. Runaway weights trigger a framework reset.
  void update_devex(int enter, int leave, const std::vector<double>& d,
                    const std::vector<bool>& is_basic) {
    const double aq = d[leave];
    if (std::fabs(aq) < kPivTol) return;
    const double scale = devex_[enter] / (aq * aq);
    const double* prow = &binv_[static_cast<std::size_t>(leave) * m_];
    double peak = 0.0;
    for (int j = 0; j < n_; ++j) {
      if (is_basic[j] || j == enter) continue;
      double rho = 0.0;
      for (auto [row, v] : cols_[j].entries) rho += prow[row] * v;
      if (rho == 0.0) continue;
      const double cand = rho * rho * scale;
      if (cand > devex_[j]) devex_[j] = cand;
      if (devex_[j] > peak) peak = devex_[j];
    }
    const int leaving = basis_[leave];
    if (leaving < n_) devex_[leaving] = std::max(scale, 1.0);
    if (peak > kDevexReset) devex_.assign(n_, 1.0);
  }
};

inline LpResult solve_lp(const LpProblem& p, long iter_limit = 0) {
  return RevisedSimplex(p).solve(iter_limit);
}

inline LpResult solve_lp(const LpProblem& p, const std::vector<int>& seed_basis,
                         long iter_limit = 0) {
  return RevisedSimplex(p).solve(seed_basis, iter_limit);
}

// Sifting for column counts far beyond the row count: solve the LP over a
// working subset, price every outside column with the subset duals, pull in
// the violators, repeat. Once nothing outside prices negative, the subset
// optimum padded with zeros is optimal for the full LP and the duals certify
// it. An infeasible subset is priced with its phase-1 duals instead, so
// columns that could repair the infeasibility join before that verdict
// stands. Deterministic like the underlying solver.
inline LpResult solve_lp_sifted(const LpProblem& p, const std::vector<int>& seed,
                                long iter_limit = 0) {
  static constexpr int kDirect = 30000;    // below this, one-shot solve
  static constexpr int kPerRow = 8;        // cheapest covers per row in the first set
  static constexpr int kAddCap = 20000;    // violated columns admitted per round
  static constexpr double kTol = 1e-7;
  const int n = static_cast<int>(p.cols.size());
  if (n <= kDirect || p.rows == 0) return solve_lp(p, seed, iter_limit);

  std::vector<char> in_w(n, 0);
  std::vector<int> seed_ids;
  for (int j : seed)
    if (j >= 0 && j < n) {
      in_w[j] = 1;
      seed_ids.push_back(j);
    }
  std::vector<std::vector<std::pair<double, int>>> best(p.rows);
  for (auto& b : best) b.reserve(kPerRow + 1);
  for (int j = 0; j < n; ++j) {
    const std::pair<double, int> cand{p.cost[j], j};
    for (auto [row, v] : p.cols[j].entries) {
      (void)v;
      auto& b = best[row];
      if (b.size() == kPerRow && !(cand < b.back())) continue;
      b.insert(std::upper_bound(b.begin(), b.end(), cand), cand);
      if (b.size() > kPerRow) b.pop_back();
    }
  }
  for (const auto& b : best)
    for (const auto& [c, j] : b) {
      (void)c;
      in_w[j] = 1;
    }
  std::vector<int> W;
  for (int j = 0; j < n; ++j)
    if (in_w[j]) W.push_back(j);

  long total_iters = 0;
  for (int round = 0; round < 60; ++round) {
    LpProblem sub;
    sub.rows = p.rows;
    sub.rhs = p.rhs;
    sub.cost.reserve(W.size());
    sub.cols.reserve(W.size());
    for (int j : W) {
      sub.cost.push_back(p.cost[j]);
      sub.cols.push_back(p.cols[j]);
    }
    std::vector<int> sub_seed;
    sub_seed.reserve(seed_ids.size());
    for (int j : seed_ids) {
      const auto it = std::lower_bound(W.begin(), W.end(), j);
      if (it != W.end() && *it == j) sub_seed.push_back(static_cast<int>(it - W.begin()));
    }
    LpResult r = solve_lp(sub, sub_seed, iter_limit);
    total_iters += r.iterations;
    const int subn = static_cast<int>(W.size());
    std::vector<int> basis_ids;
    basis_ids.reserve(r.basis.size());
    for (int b : r.basis) basis_ids.push_back(b < subn ? W[b] : n + (b - subn));
    if (r.status != LpStatus::optimal && r.status != LpStatus::infeasible) {
      r.x.clear();
      r.basis = std::move(basis_ids);
      r.iterations = total_iters;
      return r;
    }

    const bool phase1 = r.status == LpStatus::infeasible;
    std::vector<std::pair<double, int>> violated;
    for (int j = 0; j < n; ++j) {
      if (in_w[j]) continue;
      double dot = 0.0;
      for (auto [row, v] : p.cols[j].entries) dot += r.y[row] * v;
      const double rc = (phase1 ? 0.0 : p.cost[j]) - dot;
      if (rc < -kTol) violated.push_back({rc, j});
    }
    if (violated.empty()) {
      LpResult out;
      out.status = r.status;
      out.objective = r.objective;
      out.y = std::move(r.y);
      out.basis = std::move(basis_ids);
      out.iterations = total_iters;
      if (out.status == LpStatus::optimal) {
        out.x.assign(n, 0.0);
        for (int k = 0; k < subn; ++k) out.x[W[k]] = r.x[k];
      }
      return out;
    }
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
    seed_ids.clear();
    for (int b : basis_ids)
      if (b < n) seed_ids.push_back(b);
  }
  throw SolverError("simplex: sifting failed to converge");
}

}  // namespace darp
