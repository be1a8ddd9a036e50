#pragma once

#include <string>
#include <vector>

#include "banditgap/lp.hpp"
#include "banditgap/model.hpp"

namespace banditgap {

// Column layout shared by the arm-level relaxations: one play variable per
// (global node, action, time) and one occupation variable per (node, time),
// times running 1..B.
struct VarIndex {
  int G = 0, A = 0, B = 0;
  int x(int g, int a, int t) const { return (g * A + a) * B + (t - 1); }
  int s(int g, int t) const { return G * A * B + g * B + (t - 1); }
  int num_x() const { return G * A * B; }
  int total() const { return G * A * B + G * B; }
};

struct BuiltLp {
  LpProblem prob;
  VarIndex vix;
  std::vector<std::string> row_names;
};

// Arm-level relaxation with pausing dynamics: unplayed occupation stays put.
// Rows: per-time unit capacity; per-(node,time) play mass bounded by
// occupation (an equality lock on bridge nodes); initial occupation on the
// roots; flow balance; a single pin forcing every unplayable play variable
// to zero.
BuiltLp build_poly_lp(const FlatModel& fm);

// Same column layout with abandonment dynamics: occupation at a non-root that
// is not played does not survive to the next time (only fresh inflow does).
// This matches play disciplines where pausing an arm forfeits it.
BuiltLp build_poly_lp_nopreempt(const FlatModel& fm);

// Picks the relaxation matching the instance mode.
BuiltLp build_relaxation(const FlatModel& fm);

// Completion statistics for job lists: er[i][t-1] is the expected reward of
// starting job i at time t counting only outcomes that finish within the
// budget; survival[i][d] is the probability job i still runs after d served
// units.
struct ErTable {
  int budget = 0;
  std::vector<std::vector<double>> er;
  std::vector<std::vector<double>> survival;
};
ErTable build_er_table(const std::vector<KnapsackJob>& jobs, int budget);

// Job-level relaxation over start variables x(i,t): expected-occupancy
// capacity per time step plus one start-budget row per job.
struct JobLp {
  LpProblem prob;
  int num_jobs = 0;
  int B = 0;
  std::vector<std::string> row_names;
  int x(int i, int t) const { return i * B + (t - 1); }
};
JobLp build_knapsack_lp(const std::vector<KnapsackJob>& jobs, int budget);

// solve_lp plus the certification this library insists on everywhere: the
// program must come back optimal, the duality gap and primal residuals must
// be tiny, and every variable must land in [0,1] up to round-off (slightly
// negative values are clamped to zero). Violations throw.
struct RelaxSolution {
  double objective = 0.0;
  std::vector<double> values;
  long iterations = 0;
};
RelaxSolution solve_relaxation(const LpProblem& prob,
                               const std::vector<std::string>& row_names = {},
                               const SolveOptions& opts = {});

}  // namespace banditgap
