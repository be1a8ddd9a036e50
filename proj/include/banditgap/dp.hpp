#pragma once

#include <cstdint>
#include <vector>

#include "banditgap/lp.hpp"
#include "banditgap/model.hpp"

namespace banditgap {

// Mixed-radix index over joint arm positions. Each arm contributes its node
// count plus one sentinel value ("gone": retired or abandoned).
struct JointSpace {
  std::vector<int> radix;           // per arm: nodes + 1
  std::vector<long long> stride;
  long long num_states = 0;

  static constexpr int kGone = -1;

  // arm position: local node index, or kGone.
  long long encode(const std::vector<int>& pos) const {
    long long s = 0;
    for (size_t i = 0; i < pos.size(); ++i) {
      int digit = pos[i] == kGone ? radix[i] - 1 : pos[i];
      s += stride[i] * digit;
    }
    return s;
  }
  void decode(long long s, std::vector<int>* pos) const {
    pos->resize(radix.size());
    for (size_t i = 0; i < radix.size(); ++i) {
      int digit = static_cast<int>(s % radix[i]);
      s /= radix[i];
      (*pos)[i] = digit == radix[i] - 1 ? kGone : digit;
    }
  }
};

struct DpOptions {
  long long max_states = 2'000'000;
  bool keep_decisions = true;
};

// Joint move encoding inside the decision table.
constexpr int16_t kDpIdle = -1;

struct DpResult {
  double value = 0.0;
  JointSpace space;
  // decisions[t-1][state] = arm * num_actions + action, or kDpIdle. Filled
  // when keep_decisions is set.
  std::vector<std::vector<int16_t>> decisions;
  int num_actions = 0;
};

// Exact finite-horizon optimum by backward induction over the joint space.
// `mode` may differ from the instance's own mode to price one discipline's
// structure under another's rules. The play rules:
//   * one play per step; playing node/action pairs with no transitions
//     retires the arm after paying;
//   * any arm sitting on a bridge node must be the one played (default
//     action), and idling is then illegal;
//   * no-preemption family: arms off their root that are not played are
//     abandoned (gone); preemptive: unplayed arms hold position.
// Ties prefer idling, then the lowest arm, then the lowest action, making
// the decision table deterministic.
DpResult dp_exact(const FlatModel& fm, Mode mode, const DpOptions& opts = {});
DpResult dp_exact(const FlatModel& fm, const DpOptions& opts = {});

}  // namespace banditgap
