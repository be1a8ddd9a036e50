#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <tuple>

#include "banditgap/policies.hpp"

namespace banditgap {

// Play counts for one (node, action, priority) status; `timely` counts the
// plays that happened at a global clock no later than the priority value.
struct StatusCounter {
  long played = 0;
  long timely = 0;
};

struct SimOptions {
  bool virtual_continue = false;  // keep playing past the budget, reward-free
  bool collect_status = false;    // fill SimulationReport::status_freq
  // Optional external observer; receives on_trial_begin(k) before trial k's
  // events. Runs in addition to the internal status tally.
  StepObserver* observer = nullptr;
};

struct SimulationReport {
  long trials = 0;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation (n-1 denominator)
  double ci95 = 0.0;    // 1.96 * stddev / sqrt(trials)
  uint64_t seed = 0;
  std::string policy_id;
  // Keyed by (node, action, priority); priority is -1 for policies that do
  // not assign one.
  std::map<std::tuple<int, int, int>, StatusCounter> status_freq;
};

// Runs `trials` independent trials of the policy. Trial k draws all its
// randomness from RngStream::root(seed).child(k), so reports are bit-identical
// across runs and machines for equal (policy, trials, seed, options).
SimulationReport simulate(const TrialPolicy& policy, long trials,
                          uint64_t seed, const SimOptions& opts = {});

}  // namespace banditgap
