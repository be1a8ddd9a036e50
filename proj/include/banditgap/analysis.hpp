#pragma once

#include <array>
#include <string>
#include <vector>

#include "banditgap/dp.hpp"
#include "banditgap/model.hpp"
#include "banditgap/policies.hpp"
#include "banditgap/relaxations.hpp"

namespace banditgap {

// One possible next move with its probability; arm -1 denotes idling.
struct MoveProb {
  int arm = -1;
  ActionIdx action = 0;
  double prob = 0.0;
};

// A policy whose move law is an explicit function of the joint node positions
// and the clock, so its play-mass tables can be computed exactly rather than
// estimated.
class EnumerablePolicy {
 public:
  virtual ~EnumerablePolicy() = default;
  // `nodes` holds one global node id per arm, or -1 for an arm that has
  // retired or been abandoned. The returned probabilities must sum to one
  // (an explicit idle entry included when the policy can idle).
  virtual std::vector<MoveProb> move_distribution(
      const std::vector<int>& nodes, int t) const = 0;
  virtual std::string descriptor() const = 0;
};

// Always idles; projects to zero play mass everywhere.
class IdleEnumerablePolicy final : public EnumerablePolicy {
 public:
  std::vector<MoveProb> move_distribution(const std::vector<int>&,
                                          int) const override {
    return {MoveProb{-1, 0, 1.0}};
  }
  std::string descriptor() const override { return "idle"; }
};

// Replays an exact-solve decision table as an enumerable policy.
class DpEnumerablePolicy final : public EnumerablePolicy {
 public:
  DpEnumerablePolicy(const FlatModel& fm, DpResult dp);
  std::vector<MoveProb> move_distribution(const std::vector<int>& nodes,
                                          int t) const override;
  std::string descriptor() const override { return "dp"; }

 private:
  FlatModel fm_;
  DpResult dp_;
};

// The exact half-scaling policy in enumerable form. The continuation lottery
// that the trial kernel draws on arrival is deferred to the next step here:
// with the continuation ratio the held node is played, and with the
// remainder the start lottery over untouched arms runs. Both formulations
// induce the same play law.
class HalfExactEnumerablePolicy final : public EnumerablePolicy {
 public:
  HalfExactEnumerablePolicy(const FlatModel& fm, const RelaxSolution& relax,
                            const HalfScalingPolicy& pol);
  std::vector<MoveProb> move_distribution(const std::vector<int>& nodes,
                                          int t) const override;
  std::string descriptor() const override { return "half-exact"; }

 private:
  FlatModel fm_;
  std::vector<double> xa_, xsum_, occ_;
  std::vector<std::vector<double>> commit_;
};

// Exact play-mass and occupancy tables of an enumerable policy written into
// the relaxation's variable layout, scored against the relaxation's own rows
// and against an independent backward evaluation of the policy.
struct ProjectionResult {
  VarIndex vix;
  std::vector<double> values;   // x entries then occupancy entries
  double objective = 0.0;       // relaxation objective at `values`
  double expected_value = 0.0;  // backward policy evaluation
  bool objective_match = false; // the two agree to 1e-9 * (1 + |objective|)
  double max_violation = 0.0;   // worst row residual
  std::string worst_row;
};

ProjectionResult project_policy(const FlatModel& fm,
                                const EnumerablePolicy& pol,
                                long long max_states = 2'000'000);

// Ratio between the planning relaxation's bound and the exact optimum.
// Job-backed instances are bounded with the per-job relaxation; everything
// else with the mode's own relaxation.
struct GapReport {
  double relax = 0.0;
  double exact = 0.0;
  double ratio = 1.0;
  bool infinite = false;  // positive bound over a zero optimum
};

GapReport projection_gap(const Instance& raw, const DpOptions& opts = {});

// Probability that repeated tries with success chances capped at p_max and
// summing to r produce at least one success, minimized over how the chances
// are split.
double grind_beta(double r, double p_max);

// Lower bound on the chance that one of three mean-reward piles, ground into
// plays of half the horizon, pays at least once. Requires each mean at most
// t/6 and their sum at most t/3; longer lists are merged down pigeonhole
// style (two smallest first), which preserves the cap.
double grind_bound(std::vector<double> mus, double t);

// Exhaustive grid search of grind_bound over the constraint region. The
// bound is scale-invariant, so the horizon is fixed internally.
struct GrindSweep {
  double best = 0.0;
  std::array<double, 3> at{};
  long evaluations = 0;
};

GrindSweep grind_sweep(int resolution = 600);

}  // namespace banditgap
