#pragma once

#include <vector>

#include "banditgap/model.hpp"
#include "banditgap/rng.hpp"

namespace banditgap {

// Two-job family parameterized by n: a long shot whose payoff almost always
// lands exactly at the budget boundary, next to a trivial unit job. The
// planning relaxation overvalues it by a factor approaching 2.
std::vector<KnapsackJob> gap2_jobs(int n);
Instance gen_gap2(int n, bool cancellable = false);

// Fixed three-job benchmark used across the test-suite; small enough for
// exact solving in every mode.
std::vector<KnapsackJob> bench3_jobs();
Instance gen_bench3(bool cancellable);

struct RandomSpec {
  int arms = 2;
  int budget = 5;
  int num_actions = 1;
  int max_time = 1;        // > 1 turns on multi-unit transitions
  int max_children = 2;    // branching factor per (node, action)
  int node_cap = 12;       // per-arm node budget
  double action_rate = 0.8;    // chance a non-leaf action carries transitions
  double cross_edge_rate = 0.0;  // chance a branch rejoins an existing node
  double completion_reward_rate = 0.3;  // multi-unit branches paying on landing
  double reward_scale = 1.0;
};

// Random raw instance: per-arm trees with optional rejoining edges (which can
// create shared suffixes and even cycles) and optional multi-unit
// transitions. Always clean under validate().
Instance gen_random_raw(RngStream rng, const RandomSpec& spec, Mode mode);

// Random correlated-knapsack job list; sizes within the budget.
std::vector<KnapsackJob> gen_random_jobs(RngStream rng, int jobs, int budget,
                                         int max_outcomes);

}  // namespace banditgap
