#include "banditgap/policies.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace banditgap {

namespace {

constexpr double kMassTol = 1e-12;

double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

// Samples an index from `edges` by probability; assumes the weights sum to 1
// up to round-off and falls back to the last edge.
int sample_edge(const std::vector<FlatEdge>& edges, RngStream& rng) {
  double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    acc += edges[k].prob;
    if (u < acc) return static_cast<int>(k);
  }
  return static_cast<int>(edges.size()) - 1;
}

}  // namespace

// ---------------------------------------------------------------------------
// PriorityPolicy
// ---------------------------------------------------------------------------

PriorityPolicy::PriorityPolicy(const FlatModel& fm, const RelaxSolution& relax,
                               double scale, bool bridge_forcing)
    : fm_(fm), scale_(scale), bridge_forcing_(bridge_forcing) {
  if (fm.mode != Mode::kPreemptive)
    throw std::invalid_argument(
        "priority policy: requires a preemptive instance");
  if (scale <= 0.0 || scale > 1.0)
    throw std::invalid_argument("priority policy: scale must be in (0, 1]");
  if (!bridge_forcing) {
    for (int g = 0; g < fm.num_nodes; ++g)
      if (fm.bridge[g])
        throw std::invalid_argument(
            "priority policy: instance has multi-period actions; use the "
            "bridge-forcing variant");
  }
  VarIndex vix;
  vix.G = fm.num_nodes;
  vix.A = fm.num_actions();
  vix.B = fm.budget();
  if (static_cast<int>(relax.values.size()) != vix.total())
    throw std::invalid_argument(
        "priority policy: solution size does not match the instance");
  flow_ = flow_decompose(fm, vix, relax.values, /*pausing=*/true);
}

std::string PriorityPolicy::descriptor() const {
  std::ostringstream os;
  os << (bridge_forcing_ ? "priority12" : "priority27");
  return os.str();
}

Status PriorityPolicy::draw_initial(int arm, RngStream& arm_rng) const {
  double u = arm_rng.uniform();
  const FlowGroup* sg = flow_.start_group(fm_.roots[arm]);
  if (sg != nullptr) {
    double acc = 0.0;
    for (const FlowPlay& fp : sg->plays) {
      acc += scale_ * fp.q;
      if (u < acc) return Status{fm_.roots[arm], fp.action, fp.t};
    }
  }
  return Status{};
}

Status PriorityPolicy::draw_next(const FlowGroup* group, int child_g,
                                 RngStream& arm_rng) const {
  double u = arm_rng.uniform();
  if (group != nullptr) {
    double acc = 0.0;
    for (const FlowPlay& fp : group->plays) {
      acc += fp.q;
      if (u < acc) return Status{child_g, fp.action, fp.t};
    }
  }
  return Status{};
}

double PriorityPolicy::run_trial(RngStream trial_rng, bool virtual_continue,
                                 StepObserver* observer) const {
  const int n = static_cast<int>(fm_.roots.size());
  const int B = fm_.budget();

  std::vector<RngStream> arm_rng;
  arm_rng.reserve(n);
  for (int i = 0; i < n; ++i)
    arm_rng.push_back(trial_rng.child(static_cast<uint64_t>(i)));

  std::vector<Status> st(n);
  for (int i = 0; i < n; ++i) st[i] = draw_initial(i, arm_rng[i]);

  double reward = 0.0;
  int clock = 0;
  int forced = -1;
  for (;;) {
    if (!virtual_continue && clock >= B) break;
    int pick = forced;
    forced = -1;
    if (pick < 0) {
      for (int i = 0; i < n; ++i) {
        if (!st[i].finite()) continue;
        if (pick < 0 || st[i].priority < st[pick].priority) pick = i;
      }
    }
    if (pick < 0) break;

    const Status cur = st[pick];
    ++clock;
    double accrued = clock <= B ? fm_.reward[cur.node][cur.action] : 0.0;
    reward += accrued;

    const std::vector<FlatEdge>& edges = fm_.succ[cur.node][cur.action];
    if (edges.empty()) {  // paid and retired
      st[pick] = Status{};
      if (observer)
        observer->on_step(
            {pick, cur.node, cur.action, cur.priority, clock, accrued, -1});
      continue;
    }
    int child = edges[sample_edge(edges, arm_rng[pick])].to;
    if (observer)
      observer->on_step(
          {pick, cur.node, cur.action, cur.priority, clock, accrued, child});
    const FlowGroup* grp =
        flow_.group_of(cur.node, cur.action, cur.priority, child);
    Status nxt = draw_next(grp, child, arm_rng[pick]);
    st[pick] = nxt;
    if (nxt.finite()) {
      if (bridge_forcing_ && fm_.bridge[child]) forced = pick;
      else if (nxt.priority < 2 * fm_.depth[child]) forced = pick;
    }
  }
  return reward;
}

// ---------------------------------------------------------------------------
// HalfScalingPolicy
// ---------------------------------------------------------------------------

namespace {

// Execution states of the half-scaling dynamics: which arms have been
// committed so far, plus the node the in-progress commitment sits on (-1 when
// none). Everything else about the physical state is irrelevant to the
// policy's own behavior.
uint64_t half_key(uint64_t mask, int cur, int num_nodes) {
  return mask * static_cast<uint64_t>(num_nodes + 1) +
         static_cast<uint64_t>(cur + 1);
}

}  // namespace

void HalfScalingPolicy::finish_commit_row(int t,
                                          const std::vector<double>& free_row) {
  const int n = static_cast<int>(fm_.roots.size());
  const int B = fm_.budget();
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    double x_root = xsum_[fm_.roots[i] * B + (t - 1)];
    double c = 0.0;
    if (x_root > kMassTol) {
      if (free_row[i] <= 0.0)
        throw std::runtime_error(
            "half-scaling: start mass with zero availability at time " +
            std::to_string(t));
      c = x_root / (2.0 * free_row[i]);
    }
    tables_.commit[i][t - 1] = c;
    total += c;
  }
  if (total > 1.0 + 1e-9)
    throw std::runtime_error(
        "half-scaling: start probabilities sum to " + std::to_string(total) +
        " > 1 at time " + std::to_string(t) +
        "; the input solution is not feasible for the relaxation");
}

void HalfScalingPolicy::init_mass_tables(const RelaxSolution& relax) {
  if (fm_.mode == Mode::kPreemptive)
    throw std::invalid_argument(
        "half-scaling policy: requires a non-preemptive instance");
  const int n = static_cast<int>(fm_.roots.size());
  const int G = fm_.num_nodes;
  const int A = fm_.num_actions();
  const int B = fm_.budget();
  if (n > 62)
    throw CapacityError("half-scaling: more than 62 arms unsupported");
  VarIndex vix;
  vix.G = G;
  vix.A = A;
  vix.B = B;
  if (static_cast<int>(relax.values.size()) != vix.total())
    throw std::invalid_argument(
        "half-scaling policy: solution size does not match the instance");
  xa_.assign(static_cast<std::size_t>(G) * A * B, 0.0);
  xsum_.assign(static_cast<std::size_t>(G) * B, 0.0);
  occ_.assign(static_cast<std::size_t>(G) * B, 0.0);
  for (int g = 0; g < G; ++g)
    for (int t = 1; t <= B; ++t) {
      occ_[g * B + (t - 1)] = relax.values[vix.s(g, t)];
      for (int a = 0; a < A; ++a) {
        double v = relax.values[vix.x(g, a, t)];
        xa_[(g * A + a) * B + (t - 1)] = v;
        xsum_[g * B + (t - 1)] += v;
      }
    }
  tables_.free.assign(n, std::vector<double>(B, 0.0));
  tables_.commit.assign(n, std::vector<double>(B, 0.0));
  tables_.played.assign(static_cast<std::size_t>(G) * A,
                        std::vector<double>(B, 0.0));
}

HalfScalingPolicy::HalfScalingPolicy(const FlatModel& fm,
                                     const RelaxSolution& relax,
                                     const HalfExactOptions& opts)
    : fm_(fm) {
  init_mass_tables(relax);
  const int n = static_cast<int>(fm_.roots.size());
  const int G = fm_.num_nodes;
  const int A = fm_.num_actions();
  const int B = fm_.budget();

  std::unordered_map<uint64_t, double> dist;
  dist[half_key(0, -1, G)] = 1.0;

  // Splits state mass through one play of node g at time t: action choice by
  // play-mass share, transition by edge probability, then the continuation
  // lottery against next-step occupation.
  auto handle_play = [&](std::unordered_map<uint64_t, double>& out,
                         uint64_t mask, int g, int t, double p) {
    double xs = xsum_[g * B + (t - 1)];
    if (xs <= kMassTol) {  // relaxation never plays here; drop out
      out[half_key(mask, -1, G)] += p;
      return;
    }
    for (int a = 0; a < A; ++a) {
      double xa = xa_[(g * A + a) * B + (t - 1)];
      if (xa <= kMassTol) continue;
      double pa = p * (xa / xs);
      tables_.played[g * A + a][t - 1] += pa;
      const std::vector<FlatEdge>& edges = fm_.succ[g][a];
      if (edges.empty()) {
        out[half_key(mask, -1, G)] += pa;
        continue;
      }
      for (const FlatEdge& e : edges) {
        double qc = 0.0;
        if (t < B) {
          double s_next = occ_[e.to * B + t];
          double x_next = xsum_[e.to * B + t];
          qc = s_next > kMassTol ? clamp01(x_next / s_next) : 0.0;
        }
        if (qc > 0.0) out[half_key(mask, e.to, G)] += pa * e.prob * qc;
        if (qc < 1.0) out[half_key(mask, -1, G)] += pa * e.prob * (1.0 - qc);
      }
    }
  };

  for (int t = 1; t <= B; ++t) {
    if (dist.size() > opts.max_states)
      throw CapacityError("half-scaling: execution-state count " +
                          std::to_string(dist.size()) + " exceeds cap");
    std::vector<double> free_row(n, 0.0);
    for (const auto& [key, p] : dist) {
      int cur = static_cast<int>(key % (G + 1)) - 1;
      uint64_t mask = key / (G + 1);
      if (cur >= 0) continue;
      for (int i = 0; i < n; ++i)
        if (!((mask >> i) & 1)) free_row[i] += p;
    }
    for (int i = 0; i < n; ++i) tables_.free[i][t - 1] = free_row[i];
    finish_commit_row(t, free_row);

    std::unordered_map<uint64_t, double> next;
    for (const auto& [key, p] : dist) {
      int cur = static_cast<int>(key % (G + 1)) - 1;
      uint64_t mask = key / (G + 1);
      if (cur >= 0) {
        handle_play(next, mask, cur, t, p);
        continue;
      }
      double stay = 1.0;
      for (int i = 0; i < n; ++i) {
        if ((mask >> i) & 1) continue;
        double c = tables_.commit[i][t - 1];
        if (c <= 0.0) continue;
        stay -= c;
        handle_play(next, mask | (1ULL << i), fm_.roots[i], t, p * c);
      }
      if (stay > 0.0) next[half_key(mask, -1, G)] += p * stay;
    }
    dist.swap(next);
  }
}

HalfScalingPolicy::HalfScalingPolicy(const FlatModel& fm,
                                     const RelaxSolution& relax,
                                     double epsilon, double delta,
                                     RngStream est_rng)
    : fm_(fm) {
  init_mass_tables(relax);
  if (epsilon <= 0.0 || epsilon >= 1.0 || delta <= 0.0 || delta >= 1.0)
    throw std::invalid_argument(
        "half-scaling sampled: epsilon and delta must lie in (0, 1)");
  sampled_ = true;
  epsilon_ = epsilon;
  delta_ = delta;
  const int n = static_cast<int>(fm_.roots.size());
  const int B = fm_.budget();
  med_ = static_cast<long>(
      std::ceil(3.0 * std::log(2.0 / delta) / (epsilon * epsilon)));
  M_ = static_cast<long>(
      std::ceil(8.0 * B * n / epsilon * static_cast<double>(med_)));
  const double factor = (1.0 - epsilon) * (1.0 - epsilon);

  std::vector<std::vector<double>> free_emp(n, std::vector<double>(B, 0.0));
  std::vector<std::vector<double>> commit_emp(n, std::vector<double>(B, 0.0));

  for (int t = 1; t <= B; ++t) {
    std::vector<long> counts(n, 0);
    for (long m = 0; m < M_; ++m) {
      RngStream r = est_rng.child(static_cast<uint64_t>(t - 1) *
                                      static_cast<uint64_t>(M_) +
                                  static_cast<uint64_t>(m));
      uint64_t mask = 0;
      int cur = -1;
      for (int tp = 1; tp < t; ++tp)
        kernel_step_sample(tp, mask, cur, r, commit_emp, nullptr, nullptr);
      if (cur == -1)
        for (int i = 0; i < n; ++i)
          if (!((mask >> i) & 1)) ++counts[i];
    }
    double fallback_base = 0.0;
    for (int j = 0; j < n; ++j)
      fallback_base += 0.5 * xsum_[fm_.roots[j] * B + (t - 1)];
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      double fhat = counts[i] > med_
                        ? static_cast<double>(counts[i]) / M_
                        : fallback_base;
      free_emp[i][t - 1] = fhat;
      double x_root = xsum_[fm_.roots[i] * B + (t - 1)];
      double c = 0.0;
      if (x_root > kMassTol && fhat > 0.0)
        c = factor * x_root / (2.0 * fhat);
      commit_emp[i][t - 1] = c;
      total += c;
    }
    if (total > 1.0) {  // estimation failure event; degrade proportionally
      for (int i = 0; i < n; ++i) commit_emp[i][t - 1] /= total;
    }
  }
  tables_.free = std::move(free_emp);
  tables_.commit = std::move(commit_emp);
}

std::string HalfScalingPolicy::descriptor() const {
  if (!sampled_) return "half-exact";
  std::ostringstream os;
  os << "half-sampled(eps=" << epsilon_ << ",delta=" << delta_ << ")";
  return os.str();
}

// One clock of the half-scaling dynamics, shared by trials and the sampling
// estimator: commit lottery when idle (playing the committed root in the same
// step), otherwise play the held node; transition and the continuation
// lottery decide whether the commitment survives.
void HalfScalingPolicy::kernel_step_sample(
    int t, uint64_t& mask, int& cur, RngStream& rng,
    const std::vector<std::vector<double>>& commit, double* reward,
    StepObserver* observer) const {
  const int n = static_cast<int>(fm_.roots.size());
  const int A = fm_.num_actions();
  const int B = fm_.budget();
  if (cur < 0) {
    double u = rng.uniform();
    double acc = 0.0;
    int pick = -1;
    for (int i = 0; i < n; ++i) {
      if ((mask >> i) & 1) continue;
      acc += commit[i][t - 1];
      if (u < acc) {
        pick = i;
        break;
      }
    }
    if (pick < 0) return;  // idle step
    mask |= 1ULL << pick;
    cur = fm_.roots[pick];
  }
  int g = cur;
  double xs = xsum_[g * B + (t - 1)];
  if (xs <= kMassTol) {
    cur = -1;
    return;
  }
  double u = rng.uniform();
  double acc = 0.0;
  int a = -1;
  for (int b = 0; b < A; ++b) {
    acc += xa_[(g * A + b) * B + (t - 1)] / xs;
    if (u < acc) {
      a = b;
      break;
    }
  }
  if (a < 0) a = A - 1;
  double r = fm_.reward[g][a];
  if (reward) *reward += r;
  const std::vector<FlatEdge>& edges = fm_.succ[g][a];
  if (edges.empty()) {
    cur = -1;
    if (observer) observer->on_step({fm_.arm_of[g], g, a, -1, t, r, -1});
    return;
  }
  int v = edges[sample_edge(edges, rng)].to;
  double qc = 0.0;
  if (t < B) {
    double s_next = occ_[v * B + t];
    double x_next = xsum_[v * B + t];
    qc = s_next > kMassTol ? clamp01(x_next / s_next) : 0.0;
  }
  cur = rng.uniform() < qc ? v : -1;
  if (observer) observer->on_step({fm_.arm_of[g], g, a, -1, t, r, cur});
}

double HalfScalingPolicy::run_trial(RngStream trial_rng, bool virtual_continue,
                                    StepObserver* observer) const {
  (void)virtual_continue;  // dynamics already end exactly at the budget
  RngStream rng = trial_rng.child(0);
  const int B = fm_.budget();
  uint64_t mask = 0;
  int cur = -1;
  double reward = 0.0;
  for (int t = 1; t <= B; ++t)
    kernel_step_sample(t, mask, cur, rng, tables_.commit, &reward, observer);
  return reward;
}

// ---------------------------------------------------------------------------
// DpTrialPolicy
// ---------------------------------------------------------------------------

DpTrialPolicy::DpTrialPolicy(const FlatModel& fm, DpResult dp)
    : fm_(fm), dp_(std::move(dp)) {
  if (dp_.decisions.empty())
    throw std::invalid_argument(
        "dp policy: the solve must keep its decision table");
}

std::string DpTrialPolicy::descriptor() const { return "dp"; }

double DpTrialPolicy::run_trial(RngStream trial_rng, bool virtual_continue,
                                StepObserver* observer) const {
  (void)virtual_continue;  // the table has no plays past the budget
  RngStream rng = trial_rng.child(0);
  const int n = static_cast<int>(fm_.roots.size());
  const int A = dp_.num_actions;
  const int B = fm_.budget();
  const bool preemptive = fm_.mode == Mode::kPreemptive;

  std::vector<int> pos(n);  // local node per arm, or JointSpace::kGone
  for (int i = 0; i < n; ++i) pos[i] = fm_.roots[i] - fm_.base[i];

  auto settle = [&](int played_arm) {
    if (preemptive) return;
    for (int i = 0; i < n; ++i) {
      if (i == played_arm || pos[i] == JointSpace::kGone) continue;
      if (fm_.base[i] + pos[i] != fm_.roots[i]) pos[i] = JointSpace::kGone;
    }
  };

  double reward = 0.0;
  for (int t = 1; t <= B; ++t) {
    long long state = dp_.space.encode(pos);
    int16_t d = dp_.decisions[t - 1][state];
    if (d == kDpIdle) {
      settle(-1);
      continue;
    }
    int arm = d / A;
    int action = d % A;
    int g = fm_.base[arm] + pos[arm];
    double r = fm_.reward[g][action];
    reward += r;
    settle(arm);
    const std::vector<FlatEdge>& edges = fm_.succ[g][action];
    int landed = -1;
    if (edges.empty()) {
      pos[arm] = JointSpace::kGone;
    } else {
      landed = edges[sample_edge(edges, rng)].to;
      pos[arm] = landed - fm_.base[arm];
    }
    if (observer) observer->on_step({arm, g, action, -1, t, r, landed});
  }
  return reward;
}

}  // namespace banditgap
