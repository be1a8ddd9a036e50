#include "banditgap/generators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace banditgap {

std::vector<KnapsackJob> gap2_jobs(int n) {
  if (n < 2) throw std::invalid_argument("gap2_jobs: n must be >= 2");
  std::vector<KnapsackJob> jobs(2);
  jobs[0].outcomes = {JobOutcome{n + 1, 1.0 - 1.0 / n, 1.0},
                      JobOutcome{1, 1.0 / n, 0.0}};
  jobs[1].outcomes = {JobOutcome{1, 1.0, 1.0}};
  return jobs;
}

Instance gen_gap2(int n, bool cancellable) {
  return jobs_to_arms(gap2_jobs(n), n + 1, cancellable);
}

std::vector<KnapsackJob> bench3_jobs() {
  std::vector<KnapsackJob> jobs(3);
  jobs[0].outcomes = {JobOutcome{6, 0.5, 4.0}, JobOutcome{1, 0.5, 4.0}};
  jobs[1].outcomes = {JobOutcome{9, 1.0, 9.0}};
  jobs[2].outcomes = {JobOutcome{8, 0.5, 8.0}, JobOutcome{4, 0.5, 8.0}};
  return jobs;
}

Instance gen_bench3(bool cancellable) {
  return jobs_to_arms(bench3_jobs(), 10, cancellable);
}

namespace {

// Grows one random arm as a budget-respecting tree with optional rejoining
// edges. `remaining` is the time still available on the cheapest path from
// the root, so every node stays reachable within the budget.
struct ArmBuilder {
  const RandomSpec& spec;
  RngStream& rng;
  Arm arm;
  int na;
  std::vector<int> remaining_of;  // per node, for rejoin feasibility

  int new_node(const std::string& id, int remaining) {
    Node nd;
    nd.id = id;
    nd.rewards.assign(na, 0.0);
    nd.transitions.assign(na, {});
    for (int a = 0; a < na; ++a)
      nd.rewards[a] = spec.reward_scale * rng.uniform();
    int idx = static_cast<int>(arm.nodes.size());
    arm.nodes.push_back(std::move(nd));
    remaining_of.push_back(remaining);
    return idx;
  }

  void grow(int u, int remaining, const std::string& id_prefix) {
    if (remaining <= 0) return;  // leaf: rewards only
    for (int a = 0; a < na; ++a) {
      bool carry = rng.uniform() < spec.action_rate;
      if (u == arm.root && a == kDefaultAction) carry = true;  // root playable
      if (!carry) continue;
      int k = 1 + static_cast<int>(rng.below(
                      static_cast<uint64_t>(std::max(1, spec.max_children))));
      std::vector<double> weights(k);
      double total = 0.0;
      for (double& w : weights) {
        w = 0.1 + rng.uniform();
        total += w;
      }
      for (int c = 0; c < k; ++c) {
        int tmax = std::min(spec.max_time, remaining);
        int t = 1 + static_cast<int>(rng.below(static_cast<uint64_t>(tmax)));
        double p = weights[c] / total;
        double rc = 0.0;
        if (t > 1 && rng.uniform() < spec.completion_reward_rate)
          rc = spec.reward_scale * rng.uniform();
        int target = -1;
        if (rng.uniform() < spec.cross_edge_rate && arm.nodes.size() > 1) {
          // Rejoin any existing node; reachability only improves.
          target = static_cast<int>(rng.below(arm.nodes.size()));
        }
        if (target < 0) {
          if (static_cast<int>(arm.nodes.size()) >= spec.node_cap) {
            // Node budget exhausted: park on a fresh leaf only if one is
            // cheap, otherwise rejoin the root's first child region.
            target = static_cast<int>(rng.below(arm.nodes.size()));
          } else {
            std::string id = id_prefix + "." + std::to_string(a) +
                             std::to_string(c);
            target = new_node(id, remaining - t);
            grow(target, remaining - t, id);
          }
        }
        arm.nodes[u].transitions[a].push_back(RawTransition{target, t, p, rc});
      }
    }
  }
};

}  // namespace

Instance gen_random_raw(RngStream rng, const RandomSpec& spec, Mode mode) {
  Instance inst;
  inst.budget = spec.budget;
  inst.mode = mode;
  inst.actions.push_back("pull");
  for (int a = 1; a < spec.num_actions; ++a)
    inst.actions.push_back("alt" + std::to_string(a));
  for (int ai = 0; ai < spec.arms; ++ai) {
    RngStream arm_rng = rng.child(static_cast<uint64_t>(ai));
    ArmBuilder b{spec, arm_rng, Arm{}, spec.num_actions, {}};
    std::string root_id = "r" + std::to_string(ai);
    b.arm.root = b.new_node(root_id, spec.budget);
    b.grow(b.arm.root, spec.budget, root_id);
    if (non_preemptive(mode))
      b.arm.terminal_id = root_id + ".phi";
    inst.arms.push_back(std::move(b.arm));
  }
  return inst;
}

std::vector<KnapsackJob> gen_random_jobs(RngStream rng, int jobs, int budget,
                                         int max_outcomes) {
  std::vector<KnapsackJob> out(jobs);
  for (int i = 0; i < jobs; ++i) {
    RngStream jr = rng.child(static_cast<uint64_t>(i));
    int k = 1 + static_cast<int>(jr.below(
                    static_cast<uint64_t>(std::max(1, max_outcomes))));
    std::vector<double> weights(k);
    double total = 0.0;
    for (double& w : weights) {
      w = 0.1 + jr.uniform();
      total += w;
    }
    for (int o = 0; o < k; ++o) {
      JobOutcome oc;
      oc.size = 1 + static_cast<int>(jr.below(static_cast<uint64_t>(budget)));
      oc.prob = weights[o] / total;
      oc.reward = std::round(10.0 * jr.uniform()) / 2.0;
      out[i].outcomes.push_back(oc);
    }
  }
  return out;
}

}  // namespace banditgap
