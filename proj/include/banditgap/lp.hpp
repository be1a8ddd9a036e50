#pragma once

#include <stdexcept>
#include <vector>

namespace banditgap {

// Thrown when a problem exceeds the configured dense-tableau size guard.
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Rel { kLe, kEq };

struct LpTerm {
  int col = 0;
  double coef = 0.0;
};

struct LpRow {
  std::vector<LpTerm> terms;
  Rel rel = Rel::kLe;
  double rhs = 0.0;
};

// maximize objective . x  subject to rows, x >= 0.
struct LpProblem {
  int num_vars = 0;
  std::vector<double> objective;
  std::vector<LpRow> rows;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  double objective = 0.0;
  double dual_objective = 0.0;   // b . y at the optimum; matches objective
  std::vector<double> values;    // primal point (num_vars entries)
  std::vector<double> duals;     // one multiplier per input row
  long iterations = 0;
};

struct SolveOptions {
  // Maximum dense tableau cells ((rows+1) x (cols+1) doubles). The default
  // admits a few thousand rows/columns, plenty for the planning relaxations
  // this library builds; anything bigger raises CapacityError.
  long long max_cells = 80'000'000;
  long max_iterations = 0;  // 0: scale with problem size
};

// Two-phase primal simplex on a dense tableau. Pivoting follows the
// smallest-index rule in both the entering and leaving choice, which rules
// out cycling even on fully degenerate inputs. Returns primal values and a
// consistent dual vector (zero-gap certificate) when optimal.
LpSolution solve_lp(const LpProblem& prob, const SolveOptions& opts = {});

}  // namespace banditgap
