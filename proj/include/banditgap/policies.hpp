#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "banditgap/dp.hpp"
#include "banditgap/flow.hpp"
#include "banditgap/model.hpp"
#include "banditgap/relaxations.hpp"
#include "banditgap/rng.hpp"

namespace banditgap {

// Priority value meaning "this arm is never played again".
inline constexpr int kPriorityNever = std::numeric_limits<int>::max();

// Internal per-arm plan: play `action` on `node` when `priority` becomes the
// smallest outstanding index. priority == kPriorityNever means abandoned (the
// action is meaningless then).
struct Status {
  int node = -1;
  int action = -1;
  int priority = kPriorityNever;

  bool finite() const { return priority != kPriorityNever; }
};

// One play as seen by instrumentation: which arm moved, from which node and
// action, the priority of the status it was played from (-1 for policies
// without priority bookkeeping), the 1-based clock of the play, the reward
// that accrued (0 when the clock had passed the budget), and the node the arm
// holds after the play resolved (-1 when the arm is finished, abandoned, or
// dropped by a continuation lottery).
struct StepEvent {
  int arm = -1;
  int node = -1;
  int action = -1;
  int priority = -1;
  int clock = 0;
  double reward = 0.0;
  int to_node = -1;
};

class StepObserver {
 public:
  virtual ~StepObserver() = default;
  virtual void on_step(const StepEvent& ev) = 0;
  // Called by the simulator before each trial when the observer is attached
  // through SimOptions; policies themselves never call it.
  virtual void on_trial_begin(long trial) { (void)trial; }
};

// A policy that can play out one independent trial. Implementations are
// immutable after construction; each call owns its private execution state
// seeded from the given stream. When virtual_continue is set, execution keeps
// resolving plays past the budget (reward still only accrues up to it), which
// reproduces the unconditional per-status play laws exactly.
class TrialPolicy {
 public:
  virtual ~TrialPolicy() = default;
  virtual double run_trial(RngStream trial_rng, bool virtual_continue,
                           StepObserver* observer) const = 0;
  virtual std::string descriptor() const = 0;
};

// ---------------------------------------------------------------------------
// Priority-index policy (preemptive). Each arm independently gets an initial
// status (root, a, t) with probability scale * x^a_{root,t}; plays follow the
// globally smallest finite priority (ties to the lowest arm index), statuses
// after a transition are redrawn from the flow decomposition's arrival group,
// and an arm whose fresh status (u,a,t) has t < 2*depth(u) is played again
// immediately. With bridge_forcing, landing on a bridge node also forces the
// next play regardless of the index; without it, instances containing bridge
// nodes are rejected, since waiting arms could otherwise strand the policy on
// an uninterruptible node.
// ---------------------------------------------------------------------------
class PriorityPolicy : public TrialPolicy {
 public:
  // `relax` must be a solution of build_poly_lp(fm). scale is 1/3 for the
  // bridge-free variant and 1/6 for the bridge-forcing one.
  PriorityPolicy(const FlatModel& fm, const RelaxSolution& relax, double scale,
                 bool bridge_forcing);

  double run_trial(RngStream trial_rng, bool virtual_continue,
                   StepObserver* observer) const override;
  std::string descriptor() const override;

  const FlowDecomposition& flow() const { return flow_; }
  double scale() const { return scale_; }
  bool bridge_forcing() const { return bridge_forcing_; }

  // Draws the initial status of one arm (exposed for distribution tests).
  Status draw_initial(int arm, RngStream& arm_rng) const;

 private:
  Status draw_next(const FlowGroup* group, int child_g,
                   RngStream& arm_rng) const;

  FlatModel fm_;
  FlowDecomposition flow_;
  double scale_ = 0.0;
  bool bridge_forcing_ = false;
};

// ---------------------------------------------------------------------------
// Half-scaling policy (non-preemptive / knapsack). While no arm is committed,
// arm i is committed at time t with probability x_{root_i,t} / (2 Free(i,t)),
// where Free(i,t) is the probability that, under this very policy, time t
// arrives with no commitment in progress and arm i untouched. The committed
// arm picks action a with probability x^a/x and, after landing on v at time
// t+1, keeps going with probability x_{v,t+1}/s_{v,t+1} (automatically 1 on
// bridge nodes, whose occupation is locked to its play mass). Unconditional
// play probabilities then equal exactly half the relaxation's.
// ---------------------------------------------------------------------------

struct HalfTables {
  // free[i][t-1]: probability arm i is still startable at time t with no
  // commitment in progress. commit[i][t-1]: conditional start probability
  // applied in that event. played[g*A+a][t-1]: unconditional probability the
  // policy plays (g,a) at time t (equals x^a_{g,t}/2 when built exactly).
  std::vector<std::vector<double>> free;
  std::vector<std::vector<double>> commit;
  std::vector<std::vector<double>> played;
};

struct HalfExactOptions {
  // Cap on distinct (committed-set, live-node) execution states tracked by
  // the exact forward propagation, across all times.
  std::size_t max_states = 10'000'000;
};

class HalfScalingPolicy : public TrialPolicy {
 public:
  // Exact variant: Free computed by exact forward propagation of the policy's
  // own execution-state distribution. `relax` must solve
  // build_poly_lp_nopreempt(fm). Throws CapacityError past opts.max_states
  // and std::runtime_error if the commit probabilities ever sum above one
  // (impossible for a feasible relaxation solution).
  HalfScalingPolicy(const FlatModel& fm, const RelaxSolution& relax,
                    const HalfExactOptions& opts = {});

  // Sampled variant: Free estimated per the iterated simulation scheme with
  // parameters epsilon/delta; commit probabilities additionally carry a
  // (1-epsilon)^2 safety factor. est_rng drives the estimation phase.
  HalfScalingPolicy(const FlatModel& fm, const RelaxSolution& relax,
                    double epsilon, double delta, RngStream est_rng);

  double run_trial(RngStream trial_rng, bool virtual_continue,
                   StepObserver* observer) const override;
  std::string descriptor() const override;

  const HalfTables& tables() const { return tables_; }
  bool sampled() const { return sampled_; }
  long med() const { return med_; }
  long samples_per_time() const { return M_; }

 private:
  void init_mass_tables(const RelaxSolution& relax);
  void finish_commit_row(int t, const std::vector<double>& free_row);
  void kernel_step_sample(int t, uint64_t& mask, int& cur, RngStream& rng,
                          const std::vector<std::vector<double>>& commit,
                          double* reward, StepObserver* observer) const;

  FlatModel fm_;
  std::vector<double> xa_;      // play mass per (g*A+a, t-1)
  std::vector<double> xsum_;    // play mass per (g, t-1), summed over actions
  std::vector<double> occ_;     // occupation per (g, t-1)
  HalfTables tables_;
  bool sampled_ = false;
  double epsilon_ = 0.0, delta_ = 0.0;
  long med_ = 0, M_ = 0;
};

// ---------------------------------------------------------------------------
// Replays an exact-DP decision table as an executable policy.
// ---------------------------------------------------------------------------
class DpTrialPolicy : public TrialPolicy {
 public:
  DpTrialPolicy(const FlatModel& fm, DpResult dp);

  double run_trial(RngStream trial_rng, bool virtual_continue,
                   StepObserver* observer) const override;
  std::string descriptor() const override;

 private:
  FlatModel fm_;
  DpResult dp_;
};

}  // namespace banditgap
