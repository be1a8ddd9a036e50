#include "banditgap/dp.hpp"

#include <algorithm>
#include <string>

namespace banditgap {

namespace {

struct Mover {
  const FlatModel& fm;
  Mode mode;
  const JointSpace& space;
  std::vector<int> scratch;

  bool mid_process(int arm, int pos) const {
    return pos != JointSpace::kGone &&
           fm.base[arm] + pos != fm.roots[arm];
  }

  // Applies the fate of unplayed arms; `played` = -1 for idle.
  void settle_unplayed(std::vector<int>* pos, int played) const {
    if (mode == Mode::kPreemptive) return;
    for (size_t i = 0; i < pos->size(); ++i)
      if (static_cast<int>(i) != played && mid_process(i, (*pos)[i]))
        (*pos)[i] = JointSpace::kGone;
  }
};

}  // namespace

DpResult dp_exact(const FlatModel& fm, const DpOptions& opts) {
  return dp_exact(fm, fm.mode, opts);
}

DpResult dp_exact(const FlatModel& fm, Mode mode, const DpOptions& opts) {
  const int n_arms = static_cast<int>(fm.roots.size());
  const int A = fm.num_actions();
  const int B = fm.budget();

  DpResult res;
  res.num_actions = A;
  JointSpace& space = res.space;
  space.radix.resize(n_arms);
  space.stride.resize(n_arms);
  long long states = 1;
  for (int i = 0; i < n_arms; ++i) {
    int size = (i + 1 < n_arms ? fm.base[i + 1] : fm.num_nodes) - fm.base[i];
    space.radix[i] = size + 1;
    space.stride[i] = states;
    if (states > opts.max_states / space.radix[i])
      throw CapacityError("dp_exact: joint space exceeds " +
                          std::to_string(opts.max_states) + " states");
    states *= space.radix[i];
  }
  space.num_states = states;

  if (opts.keep_decisions)
    res.decisions.assign(B, std::vector<int16_t>(states, kDpIdle));

  Mover mv{fm, mode, space, {}};
  std::vector<double> next(states, 0.0), cur(states, 0.0);
  std::vector<int> pos, tmp;

  for (int t = B; t >= 1; --t) {
    for (long long s = 0; s < states; ++s) {
      space.decode(s, &pos);

      // Bridge occupancy forces the play.
      int forced = -1;
      for (int i = 0; i < n_arms && forced < 0; ++i)
        if (pos[i] != JointSpace::kGone && fm.bridge[fm.base[i] + pos[i]])
          forced = i;

      double best;
      int16_t best_move;
      auto eval_play = [&](int j, int a) {
        int g = fm.base[j] + pos[j];
        double v = fm.reward[g][a];
        if (fm.succ[g][a].empty()) {
          tmp = pos;
          tmp[j] = JointSpace::kGone;
          mv.settle_unplayed(&tmp, j);
          v += next[space.encode(tmp)];
        } else {
          for (const FlatEdge& e : fm.succ[g][a]) {
            tmp = pos;
            tmp[j] = e.to - fm.base[j];
            mv.settle_unplayed(&tmp, j);
            v += e.prob * next[space.encode(tmp)];
          }
        }
        return v;
      };

      if (forced >= 0) {
        best = eval_play(forced, kDefaultAction);
        best_move = static_cast<int16_t>(forced * A + kDefaultAction);
      } else {
        // Idle first; a strict improvement is required to displace it, so
        // ties resolve toward idling, then the lowest arm and action.
        tmp = pos;
        mv.settle_unplayed(&tmp, -1);
        best = next[space.encode(tmp)];
        best_move = kDpIdle;
        for (int j = 0; j < n_arms; ++j) {
          if (pos[j] == JointSpace::kGone) continue;
          int g = fm.base[j] + pos[j];
          for (int a = 0; a < A; ++a) {
            if (!fm.playable(g, a)) continue;
            double v = eval_play(j, a);
            if (v > best + 1e-12) {
              best = v;
              best_move = static_cast<int16_t>(j * A + a);
            }
          }
        }
      }
      cur[s] = best;
      if (opts.keep_decisions) res.decisions[t - 1][s] = best_move;
    }
    std::swap(cur, next);
  }

  std::vector<int> start(n_arms);
  for (int i = 0; i < n_arms; ++i) start[i] = fm.roots[i] - fm.base[i];
  res.value = next[space.encode(start)];
  return res;
}

}  // namespace banditgap
