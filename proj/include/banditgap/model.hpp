#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace banditgap {

using NodeIdx = int;    // index of a node within its arm
using ActionIdx = int;  // index into Instance::actions

// Index of the default action (the plain "pull"). Bridge nodes only ever
// carry transitions under this action.
constexpr ActionIdx kDefaultAction = 0;

// One stochastic transition of a played (node, action) pair. `time` is the
// number of time units the transition occupies; multi-unit transitions are
// uninterruptible once begun and are compiled away by expand_bridges().
// `reward_on_completion` is paid at the final unit, provided that unit still
// falls within the budget.
struct RawTransition {
  NodeIdx to = -1;
  int time = 1;
  double prob = 0.0;
  double reward_on_completion = 0.0;
};

struct Node {
  std::string id;
  bool is_bridge = false;
  // Depth within the layered DAG; -1 until layer() has run (or the instance
  // was loaded in already-layered shape).
  int depth = -1;
  std::vector<double> rewards;                          // per action, on-pull
  std::vector<std::vector<RawTransition>> transitions;  // per action

  bool playable(ActionIdx a) const {
    return !transitions[a].empty() || rewards[a] > 0.0;
  }
  bool has_any_transition() const {
    for (const auto& ts : transitions)
      if (!ts.empty()) return true;
    return false;
  }
};

// A single arm: a Markov chain over `nodes` started at `root`. In the
// no-preemption modes, `terminal_id` names the virtual "walked away" marker;
// it is not a member of `nodes` and can never be played.
struct Arm {
  NodeIdx root = 0;
  std::vector<Node> nodes;
  std::optional<std::string> terminal_id;
};

enum class Mode {
  kPreemptive,        // arms may be paused and resumed freely
  kNonPreemptive,     // leaving a non-root node abandons the arm for good
  kKnapsackCancel,    // non-preemptive; arms built from cancellable jobs
  kKnapsackNoCancel,  // non-preemptive; arms built from committed jobs
};

inline bool non_preemptive(Mode m) { return m != Mode::kPreemptive; }

const char* mode_name(Mode m);
std::optional<Mode> mode_from_name(const std::string& name);

// One possible realization of a knapsack job: it occupies `size` units and
// pays `reward` if it completes within the budget.
struct JobOutcome {
  int size = 1;
  double prob = 0.0;
  double reward = 0.0;
};

struct KnapsackJob {
  std::vector<JobOutcome> outcomes;
  // Pr[S > d] for integer d >= 0.
  double survival(int d) const {
    double s = 0.0;
    for (const auto& o : outcomes)
      if (o.size > d) s += o.prob;
    return s;
  }
};

struct Instance {
  int budget = 0;
  Mode mode = Mode::kPreemptive;
  std::vector<std::string> actions;  // names; index 0 is the default action
  std::vector<Arm> arms;
  // Original job list when the instance was built from one (kept so that
  // job-level tooling can run without re-deriving it).
  std::vector<KnapsackJob> jobs;

  int num_actions() const { return static_cast<int>(actions.size()); }
  int num_arms() const { return static_cast<int>(arms.size()); }
};

// A validation failure, naming the arm/node/constraint involved.
struct Violation {
  int arm = -1;          // -1 for instance-level problems
  std::string node;      // empty when not node-specific
  std::string constraint;
  std::string detail;
};

std::string to_string(const Violation& v);

// Structural checks: action table sane, probabilities normalized, bridge
// shape, reachability within the budget, reward signs, job shapes.
std::vector<Violation> validate(const Instance& inst);

// Replaces every transition of time T >= 2 by a chain of T-1 single-action
// bridge nodes; a completion-contingent reward lands on the final bridge
// node. Time-1 completion rewards fold into the source node's action reward
// (scaled by the transition probability), which preserves expected reward.
// Returns the input unchanged when it is already unit-time; throws if
// multi-unit transitions and bridge nodes are both present.
Instance expand_bridges(const Instance& inst);

// Time-expands a unit-time instance into a layered DAG: copies "orig@d" at
// every reachable depth d <= budget-1, transitions going depth d -> d+1.
// Transition mass that would land deeper is redirected to one zero-reward
// sink per arm at the cut depth. No-op (aside from filling in depths) when
// the instance is already in layered shape.
Instance layer(const Instance& inst);

// expand_bridges followed by layer.
Instance prepare(const Instance& inst);

// True when every arm is a layered DAG with unit-time transitions and depth
// fields filled in.
bool is_layered(const Instance& inst);

// Builds the arm instance for a job list. Committed (cancellable=false) jobs
// become a root with one multi-unit transition per outcome, carrying the
// reward on completion. Cancellable jobs become per-outcome chains of
// ordinary nodes, each chain node also exposing a "cancel" action to a
// zero-reward sink; the completion reward is paid on the pull of the final
// chain node. The mode field is set accordingly and the job list is kept.
Instance jobs_to_arms(const std::vector<KnapsackJob>& jobs, int budget,
                      bool cancellable);

// ---------------------------------------------------------------------------
// Flattened view used by the LP builders, policies and analysis: global node
// numbering plus unit-time successor/parent lists. Requires a layered
// instance.
// ---------------------------------------------------------------------------

struct FlatEdge {
  int to = -1;  // global node id
  double prob = 0.0;
};

struct FlatModel {
  // Owned copies of the instance-level facts the numeric code needs, so a
  // FlatModel stays valid after the Instance it was built from goes away.
  Mode mode = Mode::kPreemptive;
  int horizon = 0;                         // play budget B
  int n_actions = 0;
  int num_nodes = 0;                       // total across arms
  std::vector<int> base;                   // arm -> first global id
  std::vector<std::pair<int, NodeIdx>> of; // global id -> (arm, local idx)
  std::vector<int> arm_of;                 // global id -> arm
  std::vector<int> depth;                  // global id -> depth
  std::vector<char> bridge;                // global id -> is_bridge
  std::vector<int> roots;                  // arm -> global id of root
  // reward[g][a]; succ[g][a] = unit-time edges.
  std::vector<std::vector<double>> reward;
  std::vector<std::vector<std::vector<FlatEdge>>> succ;
  // parents[g] = list of (parent g, action, prob) with an edge into g.
  struct ParentEdge {
    int from = -1;
    ActionIdx action = 0;
    double prob = 0.0;
  };
  std::vector<std::vector<ParentEdge>> parents;
  std::vector<std::string> ids;            // global id -> node id string

  int num_actions() const { return n_actions; }
  int budget() const { return horizon; }
  const std::string& node_id(int g) const { return ids[g]; }
  bool playable(int g, ActionIdx a) const {
    return !succ[g][a].empty() || reward[g][a] > 0.0;
  }
  bool playable_any(int g) const {
    for (int a = 0; a < num_actions(); ++a)
      if (playable(g, a)) return true;
    return false;
  }
};

// Throws std::invalid_argument when the instance is not layered.
FlatModel flatten(const Instance& inst);

}  // namespace banditgap
