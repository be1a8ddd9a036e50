#include "banditgap/model.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace banditgap {

namespace {
constexpr double kProbTol = 1e-9;
}

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::kPreemptive: return "preemptive";
    case Mode::kNonPreemptive: return "non-preemptive";
    case Mode::kKnapsackCancel: return "knapsack-cancel";
    case Mode::kKnapsackNoCancel: return "knapsack-nocancel";
  }
  return "?";
}

std::optional<Mode> mode_from_name(const std::string& name) {
  if (name == "preemptive") return Mode::kPreemptive;
  if (name == "non-preemptive") return Mode::kNonPreemptive;
  if (name == "knapsack-cancel") return Mode::kKnapsackCancel;
  if (name == "knapsack-nocancel") return Mode::kKnapsackNoCancel;
  return std::nullopt;
}

std::string to_string(const Violation& v) {
  std::ostringstream os;
  os << v.constraint;
  if (v.arm >= 0) os << " arm=" << v.arm;
  if (!v.node.empty()) os << " node=" << v.node;
  os << ": " << v.detail;
  return os.str();
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

std::vector<Violation> validate(const Instance& inst) {
  std::vector<Violation> out;
  auto add = [&](int arm, const std::string& node, const char* what,
                 const std::string& detail) {
    out.push_back(Violation{arm, node, what, detail});
  };

  if (inst.budget < 1) add(-1, "", "budget", "budget must be >= 1");
  if (inst.actions.empty()) add(-1, "", "actions", "action set is empty");
  const int na = inst.num_actions();

  std::set<std::string> seen_ids;
  for (int ai = 0; ai < inst.num_arms(); ++ai) {
    const Arm& arm = inst.arms[ai];
    if (arm.nodes.empty()) {
      add(ai, "", "arm", "arm has no nodes");
      continue;
    }
    if (arm.root < 0 || arm.root >= static_cast<int>(arm.nodes.size())) {
      add(ai, "", "root", "root index out of range");
      continue;
    }
    if (arm.nodes[arm.root].is_bridge)
      add(ai, arm.nodes[arm.root].id, "root", "root may not be a bridge node");

    for (const Node& nd : arm.nodes) {
      if (!seen_ids.insert(nd.id).second)
        add(ai, nd.id, "node-id", "node id reused");
      if (static_cast<int>(nd.rewards.size()) != na ||
          static_cast<int>(nd.transitions.size()) != na) {
        add(ai, nd.id, "shape", "per-action tables not sized to action set");
        continue;
      }
      for (int a = 0; a < na; ++a) {
        if (nd.rewards[a] < 0.0)
          add(ai, nd.id, "reward", "negative reward under action " +
                                        inst.actions[a]);
        const auto& ts = nd.transitions[a];
        if (ts.empty()) continue;
        double total = 0.0;
        for (const RawTransition& t : ts) {
          if (t.to < 0 || t.to >= static_cast<int>(arm.nodes.size()))
            add(ai, nd.id, "transition", "target index out of range");
          if (t.time < 1)
            add(ai, nd.id, "transition", "transition time must be >= 1");
          if (t.prob < -kProbTol || t.prob > 1.0 + kProbTol)
            add(ai, nd.id, "transition", "probability outside [0,1]");
          if (t.reward_on_completion < 0.0)
            add(ai, nd.id, "transition", "negative completion reward");
          total += t.prob;
        }
        if (std::abs(total - 1.0) > kProbTol)
          add(ai, nd.id, "transition",
              "probabilities under action " + inst.actions[a] +
                  " sum to " + std::to_string(total));
      }
      if (nd.is_bridge) {
        bool ok = true;
        for (int a = 1; a < na; ++a)
          if (!nd.transitions[a].empty() || nd.rewards[a] != 0.0) ok = false;
        const auto& ts = nd.transitions.empty() ? std::vector<RawTransition>{}
                                                : nd.transitions[kDefaultAction];
        if (ts.size() != 1 || std::abs(ts[0].prob - 1.0) > kProbTol) ok = false;
        if (!ok)
          add(ai, nd.id, "bridge",
              "bridge nodes carry exactly one sure transition under the "
              "default action");
      }
    }

    if (arm.terminal_id) {
      if (!non_preemptive(inst.mode))
        add(ai, *arm.terminal_id, "terminal",
            "terminal marker only belongs to no-preemption modes");
      for (const Node& nd : arm.nodes)
        if (nd.id == *arm.terminal_id)
          add(ai, nd.id, "terminal", "terminal id collides with a node id");
    }

    // Shortest time-distance from the root; every node must be reachable
    // within the budget (anything deeper could never be played).
    const int n = static_cast<int>(arm.nodes.size());
    std::vector<int> dist(n, -1);
    if (arm.root >= 0 && arm.root < n) {
      dist[arm.root] = 0;
      // Bellman-style sweeps; graphs are small and times are positive.
      bool changed = true;
      while (changed) {
        changed = false;
        for (int u = 0; u < n; ++u) {
          if (dist[u] < 0) continue;
          for (int a = 0; a < std::min<int>(na, arm.nodes[u].transitions.size()); ++a)
            for (const RawTransition& t : arm.nodes[u].transitions[a]) {
              if (t.to < 0 || t.to >= n || t.prob <= 0.0) continue;
              int d = dist[u] + std::max(1, t.time);
              if (dist[t.to] < 0 || d < dist[t.to]) {
                dist[t.to] = d;
                changed = true;
              }
            }
        }
      }
      for (int u = 0; u < n; ++u) {
        if (dist[u] < 0)
          add(ai, arm.nodes[u].id, "reachability",
              "node is unreachable from the root");
        else if (dist[u] > inst.budget)
          add(ai, arm.nodes[u].id, "reachability",
              "node lies deeper than the budget allows");
      }
    }
  }

  for (size_t j = 0; j < inst.jobs.size(); ++j) {
    const KnapsackJob& job = inst.jobs[j];
    if (job.outcomes.empty()) {
      add(-1, "", "job", "job " + std::to_string(j) + " has no outcomes");
      continue;
    }
    double total = 0.0;
    for (const JobOutcome& o : job.outcomes) {
      if (o.size < 1)
        add(-1, "", "job", "job " + std::to_string(j) + " outcome size < 1");
      if (o.prob < -kProbTol || o.prob > 1.0 + kProbTol)
        add(-1, "", "job",
            "job " + std::to_string(j) + " outcome probability outside [0,1]");
      if (o.reward < 0.0)
        add(-1, "", "job", "job " + std::to_string(j) + " negative reward");
      total += o.prob;
    }
    if (std::abs(total - 1.0) > kProbTol)
      add(-1, "", "job",
          "job " + std::to_string(j) + " outcome probabilities sum to " +
              std::to_string(total));
  }

  return out;
}

// ---------------------------------------------------------------------------
// expand_bridges
// ---------------------------------------------------------------------------

namespace {

bool has_bridges(const Instance& inst) {
  for (const Arm& arm : inst.arms)
    for (const Node& nd : arm.nodes)
      if (nd.is_bridge) return true;
  return false;
}

}  // namespace

Instance expand_bridges(const Instance& inst) {
  // Nothing to expand and nothing to fold: unit-time transitions only, with
  // every completion reward already sitting on a pull.
  bool needs_work = false;
  for (const Arm& arm : inst.arms)
    for (const Node& nd : arm.nodes)
      for (const auto& ts : nd.transitions)
        for (const RawTransition& t : ts)
          needs_work |= t.time > 1 || t.reward_on_completion != 0.0;
  if (!needs_work) return inst;
  if (has_bridges(inst))
    throw std::runtime_error(
        "expand_bridges: instance mixes multi-unit transitions with existing "
        "bridge nodes");

  Instance out = inst;
  const int na = inst.num_actions();
  for (int ai = 0; ai < inst.num_arms(); ++ai) {
    const Arm& src = inst.arms[ai];
    Arm& dst = out.arms[ai];
    dst.nodes = src.nodes;
    for (int u = 0; u < static_cast<int>(src.nodes.size()); ++u) {
      for (int a = 0; a < na; ++a) {
        // Index every access: appending bridge nodes reallocates dst.nodes.
        for (size_t j = 0; j < dst.nodes[u].transitions[a].size(); ++j) {
          RawTransition t = dst.nodes[u].transitions[a][j];
          if (t.time <= 1) {
            if (t.reward_on_completion != 0.0) {
              // A unit transition completes on the very pull that takes it;
              // folding prob * reward into the on-pull reward preserves the
              // expected reward of every play sequence.
              dst.nodes[u].rewards[a] += t.prob * t.reward_on_completion;
              dst.nodes[u].transitions[a][j].reward_on_completion = 0.0;
            }
            continue;
          }
          // Chain of t.time - 1 bridge nodes; the completion reward is paid
          // on the pull of the last one.
          const std::string base = src.nodes[u].id + "~" + std::to_string(a) +
                                   "~" + std::to_string(j);
          int prev = -1;
          int first = -1;
          for (int k = 1; k < t.time; ++k) {
            Node b;
            b.id = base + "~w" + std::to_string(k);
            b.is_bridge = true;
            b.rewards.assign(na, 0.0);
            b.transitions.assign(na, {});
            int idx = static_cast<int>(dst.nodes.size());
            dst.nodes.push_back(std::move(b));
            if (prev >= 0)
              dst.nodes[prev].transitions[kDefaultAction].push_back(
                  RawTransition{idx, 1, 1.0, 0.0});
            else
              first = idx;
            prev = idx;
          }
          dst.nodes[prev].rewards[kDefaultAction] = t.reward_on_completion;
          dst.nodes[prev].transitions[kDefaultAction].push_back(
              RawTransition{t.to, 1, 1.0, 0.0});
          dst.nodes[u].transitions[a][j] = RawTransition{first, 1, t.prob, 0.0};
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// layer
// ---------------------------------------------------------------------------

namespace {

// Tries to read a single consistent depth per node off a unit-time arm.
// Succeeds only when the arm is already in layered shape.
bool try_derive_layers(const Arm& arm, int budget, std::vector<int>* depths) {
  const int n = static_cast<int>(arm.nodes.size());
  depths->assign(n, -1);
  (*depths)[arm.root] = 0;
  std::deque<int> q{arm.root};
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    for (const auto& ts : arm.nodes[u].transitions)
      for (const RawTransition& t : ts) {
        if (t.time != 1) return false;
        if (t.prob <= 0.0) continue;
        int d = (*depths)[u] + 1;
        if (d > budget) return false;
        if ((*depths)[t.to] < 0) {
          (*depths)[t.to] = d;
          q.push_back(t.to);
        } else if ((*depths)[t.to] != d) {
          return false;
        }
      }
  }
  for (int u = 0; u < n; ++u)
    if ((*depths)[u] < 0) return false;
  return true;
}

}  // namespace

bool is_layered(const Instance& inst) {
  std::vector<int> depths;
  for (const Arm& arm : inst.arms)
    if (!try_derive_layers(arm, inst.budget, &depths)) return false;
  return true;
}

Instance layer(const Instance& inst) {
  const int B = inst.budget;
  const int na = inst.num_actions();

  // No-op detection: an already-layered instance only needs depths recorded.
  {
    bool ok = true;
    std::vector<std::vector<int>> all_depths(inst.num_arms());
    for (int ai = 0; ai < inst.num_arms() && ok; ++ai)
      ok = try_derive_layers(inst.arms[ai], B, &all_depths[ai]);
    if (ok) {
      Instance out = inst;
      for (int ai = 0; ai < inst.num_arms(); ++ai)
        for (size_t u = 0; u < out.arms[ai].nodes.size(); ++u)
          out.arms[ai].nodes[u].depth = all_depths[ai][u];
      return out;
    }
  }

  for (const Arm& arm : inst.arms)
    for (const Node& nd : arm.nodes)
      for (const auto& ts : nd.transitions)
        for (const RawTransition& t : ts)
          if (t.time != 1)
            throw std::invalid_argument(
                "layer: instance still has multi-unit transitions; run "
                "expand_bridges first");

  Instance out = inst;
  for (int ai = 0; ai < inst.num_arms(); ++ai) {
    const Arm& src = inst.arms[ai];
    Arm dst;
    dst.terminal_id = src.terminal_id;

    std::map<std::pair<int, int>, int> copy_of;  // (orig, depth) -> new idx
    auto make_copy = [&](int u, int d) {
      auto it = copy_of.find({u, d});
      if (it != copy_of.end()) return it->second;
      Node nd;
      nd.id = src.nodes[u].id + "@" + std::to_string(d);
      nd.is_bridge = src.nodes[u].is_bridge;
      nd.depth = d;
      nd.rewards = src.nodes[u].rewards;
      nd.transitions.assign(na, {});
      int idx = static_cast<int>(dst.nodes.size());
      dst.nodes.push_back(std::move(nd));
      copy_of[{u, d}] = idx;
      return idx;
    };

    int sink = -1;
    auto make_sink = [&]() {
      if (sink >= 0) return sink;
      Node nd;
      nd.id = "arm" + std::to_string(ai) + "~sink@" + std::to_string(B);
      nd.depth = B;
      nd.rewards.assign(na, 0.0);
      nd.transitions.assign(na, {});
      sink = static_cast<int>(dst.nodes.size());
      dst.nodes.push_back(std::move(nd));
      return sink;
    };

    dst.root = make_copy(src.root, 0);
    std::deque<std::pair<int, int>> q{{src.root, 0}};
    std::set<std::pair<int, int>> visited{{src.root, 0}};
    while (!q.empty()) {
      auto [u, d] = q.front();
      q.pop_front();
      int from = copy_of.at({u, d});
      for (int a = 0; a < na; ++a) {
        // Aggregate per target: duplicate raw rows collapse into one edge.
        std::map<int, double> mass;
        for (const RawTransition& t : src.nodes[u].transitions[a]) {
          if (t.prob <= 0.0) continue;
          mass[t.to] += t.prob;
        }
        for (const auto& [v, p] : mass) {
          int to;
          if (d + 1 <= B - 1) {
            to = make_copy(v, d + 1);
            if (visited.insert({v, d + 1}).second) q.push_back({v, d + 1});
          } else {
            to = make_sink();  // cut depth: mass parks on a dead sink
          }
          dst.nodes[from].transitions[a].push_back(RawTransition{to, 1, p, 0.0});
        }
      }
    }
    out.arms[ai] = std::move(dst);
  }
  return out;
}

Instance prepare(const Instance& inst) { return layer(expand_bridges(inst)); }

// ---------------------------------------------------------------------------
// jobs_to_arms
// ---------------------------------------------------------------------------

Instance jobs_to_arms(const std::vector<KnapsackJob>& jobs, int budget,
                      bool cancellable) {
  if (jobs.empty()) throw std::invalid_argument("jobs_to_arms: no jobs");
  Instance out;
  out.budget = budget;
  out.mode = cancellable ? Mode::kKnapsackCancel : Mode::kKnapsackNoCancel;
  out.actions = cancellable ? std::vector<std::string>{"pull", "cancel"}
                            : std::vector<std::string>{"pull"};
  out.jobs = jobs;
  const int na = out.num_actions();
  constexpr ActionIdx kCancel = 1;

  for (size_t i = 0; i < jobs.size(); ++i) {
    const KnapsackJob& job = jobs[i];
    if (job.outcomes.empty())
      throw std::invalid_argument("jobs_to_arms: job without outcomes");
    const std::string prefix = "j" + std::to_string(i);

    Arm arm;
    arm.terminal_id = prefix + ".phi";
    Node root;
    root.id = prefix;
    root.rewards.assign(na, 0.0);
    root.transitions.assign(na, {});
    arm.nodes.push_back(std::move(root));
    arm.root = 0;

    // Built last so chain nodes can point at it by reserved index.
    Node end;
    end.id = prefix + ".end";
    end.rewards.assign(na, 0.0);
    end.transitions.assign(na, {});

    if (!cancellable) {
      // One committed multi-unit transition per outcome; the reward rides on
      // completion. expand_bridges turns these into locked bridge chains.
      for (const JobOutcome& o : job.outcomes) {
        if (o.size < 1)
          throw std::invalid_argument("jobs_to_arms: outcome size < 1");
        arm.nodes[0].transitions[kDefaultAction].push_back(
            RawTransition{-1 /* patched below */, o.size, o.prob, o.reward});
      }
      int end_idx = static_cast<int>(arm.nodes.size());
      arm.nodes.push_back(std::move(end));
      for (RawTransition& t : arm.nodes[0].transitions[kDefaultAction])
        t.to = end_idx;
    } else {
      // Per-outcome chains of plain nodes. Every chain node can be played on
      // (advancing the job one unit) or cancelled to the dead end; walking
      // away entirely is always possible in the no-preemption discipline.
      std::vector<std::pair<int, double>> root_edges;  // (target, prob)
      for (size_t oi = 0; oi < job.outcomes.size(); ++oi) {
        const JobOutcome& o = job.outcomes[oi];
        if (o.size < 1)
          throw std::invalid_argument("jobs_to_arms: outcome size < 1");
        if (o.size == 1) {
          // Completes on the committing pull itself.
          arm.nodes[0].rewards[kDefaultAction] += o.prob * o.reward;
          root_edges.push_back({-1, o.prob});  // -1 = straight to end
          continue;
        }
        int prev = -1;
        for (int k = 1; k < o.size; ++k) {
          Node c;
          c.id = prefix + ".o" + std::to_string(oi) + ".c" + std::to_string(k);
          c.rewards.assign(na, 0.0);
          c.transitions.assign(na, {});
          int idx = static_cast<int>(arm.nodes.size());
          arm.nodes.push_back(std::move(c));
          if (prev < 0)
            root_edges.push_back({idx, o.prob});
          else
            arm.nodes[prev].transitions[kDefaultAction].push_back(
                RawTransition{idx, 1, 1.0, 0.0});
          prev = idx;
        }
        // The final unit pays the outcome reward on its pull.
        arm.nodes[prev].rewards[kDefaultAction] = o.reward;
      }
      int end_idx = static_cast<int>(arm.nodes.size());
      arm.nodes.push_back(std::move(end));
      for (auto& [target, prob] : root_edges)
        arm.nodes[0].transitions[kDefaultAction].push_back(
            RawTransition{target < 0 ? end_idx : target, 1, prob, 0.0});
      for (int u = 1; u < end_idx; ++u) {
        // Close each chain into the end sink and expose the cancel action.
        bool is_chain_tail = arm.nodes[u].transitions[kDefaultAction].empty();
        if (is_chain_tail)
          arm.nodes[u].transitions[kDefaultAction].push_back(
              RawTransition{end_idx, 1, 1.0, 0.0});
        arm.nodes[u].transitions[kCancel].push_back(
            RawTransition{end_idx, 1, 1.0, 0.0});
      }
    }
    out.arms.push_back(std::move(arm));
  }
  return out;
}

// ---------------------------------------------------------------------------
// flatten
// ---------------------------------------------------------------------------

FlatModel flatten(const Instance& inst) {
  if (!is_layered(inst))
    throw std::invalid_argument("flatten: instance must be layered first");
  FlatModel fm;
  fm.mode = inst.mode;
  fm.horizon = inst.budget;
  fm.n_actions = inst.num_actions();
  const int na = fm.n_actions;
  for (int ai = 0; ai < inst.num_arms(); ++ai) {
    fm.base.push_back(fm.num_nodes);
    fm.num_nodes += static_cast<int>(inst.arms[ai].nodes.size());
  }
  fm.of.reserve(fm.num_nodes);
  fm.arm_of.reserve(fm.num_nodes);
  fm.depth.reserve(fm.num_nodes);
  fm.bridge.reserve(fm.num_nodes);
  fm.reward.reserve(fm.num_nodes);
  fm.succ.reserve(fm.num_nodes);
  for (int ai = 0; ai < inst.num_arms(); ++ai) {
    const Arm& arm = inst.arms[ai];
    fm.roots.push_back(fm.base[ai] + arm.root);
    for (int u = 0; u < static_cast<int>(arm.nodes.size()); ++u) {
      const Node& nd = arm.nodes[u];
      fm.of.push_back({ai, u});
      fm.ids.push_back(nd.id);
      fm.arm_of.push_back(ai);
      fm.depth.push_back(nd.depth);
      fm.bridge.push_back(nd.is_bridge ? 1 : 0);
      fm.reward.push_back(nd.rewards);
      std::vector<std::vector<FlatEdge>> succ(na);
      for (int a = 0; a < na; ++a) {
        std::map<int, double> mass;
        for (const RawTransition& t : nd.transitions[a]) {
          if (t.time != 1 || t.reward_on_completion != 0.0)
            throw std::invalid_argument(
                "flatten: multi-unit or unfolded completion reward at node " +
                nd.id + "; expand the instance first");
          if (t.prob > 0.0) mass[t.to] += t.prob;
        }
        for (const auto& [v, p] : mass)
          succ[a].push_back(FlatEdge{fm.base[ai] + v, p});
      }
      fm.succ.push_back(std::move(succ));
    }
  }
  fm.parents.assign(fm.num_nodes, {});
  for (int g = 0; g < fm.num_nodes; ++g)
    for (int a = 0; a < na; ++a)
      for (const FlatEdge& e : fm.succ[g][a])
        fm.parents[e.to].push_back(FlatModel::ParentEdge{g, a, e.prob});
  return fm;
}

}  // namespace banditgap
