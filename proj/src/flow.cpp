#include "banditgap/flow.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>

namespace banditgap {

namespace {
constexpr double kMassTol = 1e-12;
constexpr double kFeasTol = 1e-9;
}  // namespace

const FlowGroup* FlowDecomposition::group_of(int parent_g, int parent_action,
                                             int parent_t,
                                             int child_g) const {
  for (const FlowGroup& g : groups)
    if (g.parent_g == parent_g && g.parent_action == parent_action &&
        g.parent_t == parent_t && g.child_g == child_g)
      return &g;
  return nullptr;
}

const FlowGroup* FlowDecomposition::start_group(int root_g) const {
  return group_of(-1, -1, 0, root_g);
}

FlowDecomposition flow_decompose(const FlatModel& fm, const VarIndex& vix,
                                 const std::vector<double>& values,
                                 bool pausing) {
  FlowDecomposition out;
  const int A = vix.A, B = vix.B;
  auto xval = [&](int g, int a, int t) { return values[vix.x(g, a, t)]; };

  std::vector<bool> is_root(fm.num_nodes, false);
  for (int root : fm.roots) is_root[root] = true;

  for (int u = 0; u < fm.num_nodes; ++u) {
    // Arrival groups in eligibility order: the start group first, then
    // (parent_t, parent node, action) ascending.
    struct Pending {
      FlowGroup group;
      double remaining;
    };
    std::vector<Pending> pend;
    if (is_root[u]) {
      FlowGroup g;
      g.child_g = u;
      g.mass = 1.0;
      pend.push_back({g, 1.0});
    }
    // Parent edges sorted by (node, action) for the documented tie-break.
    std::vector<FlatModel::ParentEdge> edges = fm.parents[u];
    std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
      return std::tie(a.from, a.action) < std::tie(b.from, b.action);
    });
    for (int tp = 1; tp <= B; ++tp)
      for (const auto& pe : edges) {
        if (!fm.playable(pe.from, pe.action)) continue;
        double m = xval(pe.from, pe.action, tp) * pe.prob;
        if (m <= kMassTol) continue;
        FlowGroup g;
        g.parent_g = pe.from;
        g.parent_action = pe.action;
        g.parent_t = tp;
        g.child_g = u;
        g.mass = m;
        pend.push_back({g, m});
      }
    if (pend.empty()) continue;

    // Sweep this node's own plays and charge them to arrivals.
    for (int t = 1; t <= B; ++t)
      for (int a = 0; a < A; ++a) {
        if (!fm.playable(u, a)) continue;
        double need = xval(u, a, t);
        if (need <= kMassTol) continue;
        for (Pending& p : pend) {
          if (need <= kMassTol) break;
          if (p.remaining <= kMassTol) continue;
          bool start = p.group.parent_g < 0;
          bool eligible =
              start ||
              (pausing ? p.group.parent_t < t : p.group.parent_t == t - 1);
          if (!eligible) continue;
          double take = std::min(need, p.remaining);
          p.group.plays.push_back({a, t, take});  // q scaled below
          p.remaining -= take;
          need -= take;
        }
        if (need > kFeasTol)
          throw std::runtime_error(
              "flow_decompose: play mass at node " + std::to_string(u) +
              " time " + std::to_string(t) + " exceeds arrivals by " +
              std::to_string(need));
      }

    for (Pending& p : pend) {
      FlowGroup g = std::move(p.group);
      for (FlowPlay& fp : g.plays) fp.q /= g.mass;
      g.q_abandon = std::max(0.0, p.remaining / g.mass);
      out.groups.push_back(std::move(g));
    }
  }
  return out;
}

}  // namespace banditgap
