#include "banditgap/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace banditgap {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-9;
constexpr double kFeasTol = 1e-7;

struct Tableau {
  int m = 0;           // constraint rows
  int cols = 0;        // structural + slack/surplus + artificial
  std::vector<std::vector<double>> a;  // m rows of cols coefficients
  std::vector<double> rhs;             // m entries, kept nonnegative
  std::vector<int> basic;              // basic column per row
  std::vector<bool> dropped;           // redundant rows disabled after phase 1

  void pivot(int pr, int pc) {
    double piv = a[pr][pc];
    double inv = 1.0 / piv;
    for (int j = 0; j < cols; ++j) a[pr][j] *= inv;
    rhs[pr] *= inv;
    a[pr][pc] = 1.0;  // cut round-off drift on the pivot column
    for (int i = 0; i < m; ++i) {
      if (i == pr) continue;
      double f = a[i][pc];
      if (f == 0.0) continue;
      for (int j = 0; j < cols; ++j) a[i][j] -= f * a[pr][j];
      a[i][pc] = 0.0;
      rhs[i] -= f * rhs[pr];
      if (rhs[i] > -kPivotTol && rhs[i] < 0.0) rhs[i] = 0.0;
    }
    basic[pr] = pc;
  }
};

// Reduced costs r = c - c_B B^-1 A, via elimination against the unit basic
// columns of the current tableau.
std::vector<double> reduced_costs(const Tableau& t,
                                  const std::vector<double>& c) {
  std::vector<double> r = c;
  for (int i = 0; i < t.m; ++i) {
    if (t.dropped[i]) continue;
    double cb = c[t.basic[i]];
    if (cb == 0.0) continue;
    for (int j = 0; j < t.cols; ++j) r[j] -= cb * t.a[i][j];
  }
  // Basic columns are exactly zero by construction; pin them to kill drift.
  for (int i = 0; i < t.m; ++i)
    if (!t.dropped[i]) r[t.basic[i]] = 0.0;
  return r;
}

// One simplex phase: maximize c over the current basis. `allowed` masks
// columns that may enter. Returns false when unbounded.
bool run_phase(Tableau& t, const std::vector<double>& c,
               const std::vector<bool>& allowed, long max_iters,
               long* iterations) {
  std::vector<double> r = reduced_costs(t, c);
  for (;;) {
    int enter = -1;
    for (int j = 0; j < t.cols; ++j)
      if (allowed[j] && r[j] > kCostTol) {
        enter = j;  // smallest index
        break;
      }
    if (enter < 0) return true;  // optimal for this phase

    int leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < t.m; ++i) {
      if (t.dropped[i]) continue;
      double coef = t.a[i][enter];
      if (coef <= kPivotTol) continue;
      double ratio = t.rhs[i] / coef;
      if (ratio < best - 1e-12 ||
          (ratio <= best + 1e-12 &&
           (leave < 0 || t.basic[i] < t.basic[leave]))) {
        if (ratio < best) best = ratio;
        leave = i;
      }
    }
    if (leave < 0) return false;  // unbounded direction

    t.pivot(leave, enter);
    // Update reduced costs incrementally off the pivot row.
    double f = r[enter];
    if (f != 0.0) {
      for (int j = 0; j < t.cols; ++j) r[j] -= f * t.a[leave][j];
      r[enter] = 0.0;
    }
    if (++(*iterations) > max_iters)
      throw std::runtime_error(
          "simplex: iteration cap exceeded (" + std::to_string(max_iters) +
          ")");
  }
}

}  // namespace

LpSolution solve_lp(const LpProblem& prob, const SolveOptions& opts) {
  const int n = prob.num_vars;
  const int m = static_cast<int>(prob.rows.size());
  if (static_cast<int>(prob.objective.size()) != n)
    throw std::invalid_argument("solve_lp: objective size mismatch");

  // Normalize to rhs >= 0; remember flips for the dual readout.
  // Columns: [structural | slack/surplus | artificial].
  std::vector<int> flip(m, 1);
  std::vector<int> slack_col(m, -1), art_col(m, -1);
  int extra = 0;
  for (int i = 0; i < m; ++i) {
    bool flipped = prob.rows[i].rhs < 0.0;
    if (flipped) flip[i] = -1;
    bool le = prob.rows[i].rel == Rel::kLe;
    if (le) extra++;                      // slack or surplus
    if (!le || flipped) extra++;          // artificial
  }
  const int cols = n + extra;

  long long cells = static_cast<long long>(m + 1) * (cols + 1);
  if (cells > opts.max_cells)
    throw CapacityError("solve_lp: tableau of " + std::to_string(cells) +
                        " cells exceeds the size guard");

  Tableau t;
  t.m = m;
  t.cols = cols;
  t.a.assign(m, std::vector<double>(cols, 0.0));
  t.rhs.assign(m, 0.0);
  t.basic.assign(m, -1);
  t.dropped.assign(m, false);

  int next = n;
  std::vector<bool> is_art(cols, false);
  for (int i = 0; i < m; ++i) {
    const LpRow& row = prob.rows[i];
    for (const LpTerm& term : row.terms) {
      if (term.col < 0 || term.col >= n)
        throw std::invalid_argument("solve_lp: term column out of range");
      t.a[i][term.col] += flip[i] * term.coef;
    }
    t.rhs[i] = flip[i] * row.rhs;
    bool le = row.rel == Rel::kLe;
    if (le) {
      // <= with b >= 0 keeps a basic slack; flipped <= became >= and needs
      // a surplus plus an artificial.
      slack_col[i] = next;
      t.a[i][next] = (flip[i] > 0) ? 1.0 : -1.0;
      if (flip[i] > 0) t.basic[i] = next;
      ++next;
    }
    if (!le || flip[i] < 0) {
      art_col[i] = next;
      is_art[next] = true;
      t.a[i][next] = 1.0;
      t.basic[i] = next;
      ++next;
    }
  }

  LpSolution sol;
  long max_iters = opts.max_iterations > 0
                       ? opts.max_iterations
                       : 2000L + 50L * static_cast<long>(m + cols);

  // Phase 1: drive the artificials to zero.
  bool any_art = std::any_of(is_art.begin(), is_art.end(),
                             [](bool b) { return b; });
  if (any_art) {
    std::vector<double> c1(cols, 0.0);
    for (int j = 0; j < cols; ++j)
      if (is_art[j]) c1[j] = -1.0;
    std::vector<bool> allowed(cols, true);
    if (!run_phase(t, c1, allowed, max_iters, &sol.iterations))
      throw std::runtime_error("simplex: phase one reported unbounded");
    double infeas = 0.0;
    for (int i = 0; i < m; ++i)
      if (is_art[t.basic[i]]) infeas += t.rhs[i];
    if (infeas > kFeasTol) {
      sol.status = LpStatus::kInfeasible;
      return sol;
    }
    // Pivot leftover zero-level artificials out; a row with no usable
    // column is redundant and gets dropped (its multiplier is zero).
    for (int i = 0; i < m; ++i) {
      if (!is_art[t.basic[i]]) continue;
      int pc = -1;
      for (int j = 0; j < n && pc < 0; ++j)
        if (std::abs(t.a[i][j]) > kPivotTol) pc = j;
      if (pc >= 0)
        t.pivot(i, pc);
      else
        t.dropped[i] = true;
    }
  }

  // Phase 2: the real objective; artificials may not re-enter.
  std::vector<double> c2(cols, 0.0);
  for (int j = 0; j < n; ++j) c2[j] = prob.objective[j];
  std::vector<bool> allowed(cols, true);
  for (int j = 0; j < cols; ++j)
    if (is_art[j]) allowed[j] = false;
  if (!run_phase(t, c2, allowed, max_iters, &sol.iterations)) {
    sol.status = LpStatus::kUnbounded;
    return sol;
  }

  sol.status = LpStatus::kOptimal;
  sol.values.assign(n, 0.0);
  for (int i = 0; i < m; ++i)
    if (!t.dropped[i] && t.basic[i] < n) sol.values[t.basic[i]] = t.rhs[i];
  sol.objective = 0.0;
  for (int j = 0; j < n; ++j) sol.objective += prob.objective[j] * sol.values[j];

  // Dual readout: with c_extra = 0 the reduced cost of a row's slack (+1
  // column) is -y_i and of its artificial (+1 column) is -y_i as well; a
  // surplus (-1 column) gives +y_i. Undo the rhs normalization flip last.
  std::vector<double> r = reduced_costs(t, c2);
  sol.duals.assign(m, 0.0);
  for (int i = 0; i < m; ++i) {
    if (t.dropped[i]) continue;
    double y;
    if (art_col[i] >= 0)
      y = -r[art_col[i]];
    else
      y = -r[slack_col[i]];
    sol.duals[i] = flip[i] * y;
  }
  sol.dual_objective = 0.0;
  for (int i = 0; i < m; ++i)
    sol.dual_objective += prob.rows[i].rhs * sol.duals[i];
  return sol;
}

}  // namespace banditgap
