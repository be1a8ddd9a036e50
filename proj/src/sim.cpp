#include "banditgap/sim.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace banditgap {

namespace {

// Pairwise (cascade) summation: O(log n) error growth instead of O(n).
double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  std::size_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

struct StatusTally final : StepObserver {
  std::map<std::tuple<int, int, int>, StatusCounter>* freq = nullptr;
  void on_step(const StepEvent& e) override {
    StatusCounter& c = (*freq)[std::make_tuple(e.node, e.action, e.priority)];
    ++c.played;
    if (e.priority >= 0 && e.clock <= e.priority) ++c.timely;
  }
};

struct TeeObserver final : StepObserver {
  StepObserver* first = nullptr;
  StepObserver* second = nullptr;
  void on_step(const StepEvent& e) override {
    first->on_step(e);
    second->on_step(e);
  }
};

}  // namespace

SimulationReport simulate(const TrialPolicy& policy, long trials,
                          uint64_t seed, const SimOptions& opts) {
  if (trials <= 0) throw std::invalid_argument("simulate: trials must be > 0");
  SimulationReport rep;
  rep.trials = trials;
  rep.seed = seed;
  rep.policy_id = policy.descriptor();

  RngStream root = RngStream::root(seed);
  StatusTally tally;
  tally.freq = &rep.status_freq;
  StepObserver* obs = opts.collect_status ? &tally : nullptr;
  TeeObserver tee;
  if (opts.observer != nullptr) {
    if (obs != nullptr) {
      tee.first = obs;
      tee.second = opts.observer;
      obs = &tee;
    } else {
      obs = opts.observer;
    }
  }

  std::vector<double> rewards(static_cast<std::size_t>(trials));
  for (long k = 0; k < trials; ++k) {
    if (opts.observer != nullptr) opts.observer->on_trial_begin(k);
    rewards[static_cast<std::size_t>(k)] = policy.run_trial(
        root.child(static_cast<uint64_t>(k)), opts.virtual_continue, obs);
  }

  rep.mean = pairwise_sum(rewards.data(), rewards.size()) / trials;
  if (trials > 1) {
    std::vector<double> sq(rewards.size());
    for (std::size_t i = 0; i < rewards.size(); ++i) {
      double d = rewards[i] - rep.mean;
      sq[i] = d * d;
    }
    double ss = pairwise_sum(sq.data(), sq.size());
    rep.stddev = std::sqrt(ss / (trials - 1));
    rep.ci95 = 1.96 * rep.stddev / std::sqrt(static_cast<double>(trials));
  }
  return rep;
}

}  // namespace banditgap
