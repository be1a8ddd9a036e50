#include "banditgap/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace banditgap {

namespace {

constexpr double kMassTol = 1e-12;

double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

}  // namespace

// ---------------------------------------------------------------------------
// Enumerable wrappers
// ---------------------------------------------------------------------------

DpEnumerablePolicy::DpEnumerablePolicy(const FlatModel& fm, DpResult dp)
    : fm_(fm), dp_(std::move(dp)) {
  if (dp_.decisions.empty())
    throw std::invalid_argument(
        "dp policy: the solve must keep its decision table");
}

std::vector<MoveProb> DpEnumerablePolicy::move_distribution(
    const std::vector<int>& nodes, int t) const {
  std::vector<int> pos(nodes.size());
  for (size_t i = 0; i < nodes.size(); ++i)
    pos[i] = nodes[i] < 0 ? JointSpace::kGone : nodes[i] - fm_.base[i];
  long long state = dp_.space.encode(pos);
  int16_t d = dp_.decisions[t - 1][state];
  if (d == kDpIdle) return {MoveProb{-1, 0, 1.0}};
  return {MoveProb{d / dp_.num_actions, d % dp_.num_actions, 1.0}};
}

HalfExactEnumerablePolicy::HalfExactEnumerablePolicy(
    const FlatModel& fm, const RelaxSolution& relax,
    const HalfScalingPolicy& pol)
    : fm_(fm), commit_(pol.tables().commit) {
  const int G = fm.num_nodes;
  const int A = fm.num_actions();
  const int B = fm.budget();
  VarIndex vix;
  vix.G = G;
  vix.A = A;
  vix.B = B;
  if (static_cast<int>(relax.values.size()) != vix.total())
    throw std::invalid_argument(
        "half-scaling projection: solution size does not match the instance");
  xa_.assign(static_cast<size_t>(G) * A * B, 0.0);
  xsum_.assign(static_cast<size_t>(G) * B, 0.0);
  occ_.assign(static_cast<size_t>(G) * B, 0.0);
  for (int g = 0; g < G; ++g)
    for (int t = 1; t <= B; ++t) {
      occ_[g * B + (t - 1)] = relax.values[vix.s(g, t)];
      for (int a = 0; a < A; ++a) {
        double v = relax.values[vix.x(g, a, t)];
        xa_[(g * A + a) * B + (t - 1)] = v;
        xsum_[g * B + (t - 1)] += v;
      }
    }
}

std::vector<MoveProb> HalfExactEnumerablePolicy::move_distribution(
    const std::vector<int>& nodes, int t) const {
  const int A = fm_.num_actions();
  const int B = fm_.budget();
  int held = -1;
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i] < 0 || nodes[i] == fm_.roots[i]) continue;
    if (held >= 0)
      throw std::logic_error(
          "half-scaling projection: two arms mid-process is unreachable");
    held = static_cast<int>(i);
  }

  std::vector<MoveProb> out;
  double rest = 1.0;
  if (held >= 0) {
    int v = nodes[held];
    double s = occ_[v * B + (t - 1)];
    double xs = xsum_[v * B + (t - 1)];
    double ratio = s > kMassTol ? clamp01(xs / s) : 0.0;
    if (xs > kMassTol && ratio > 0.0)
      for (int a = 0; a < A; ++a) {
        double xa = xa_[(v * A + a) * B + (t - 1)];
        if (xa > kMassTol) out.push_back({held, a, ratio * (xa / xs)});
      }
    rest = 1.0 - ratio;
  }
  if (rest > 0.0) {
    double started = 0.0;
    for (size_t j = 0; j < nodes.size(); ++j) {
      if (nodes[j] != fm_.roots[static_cast<int>(j)]) continue;
      double c = commit_[j][t - 1];
      if (c <= 0.0) continue;
      started += c;
      int g = nodes[j];
      double xs = xsum_[g * B + (t - 1)];
      for (int a = 0; a < A; ++a) {
        double xa = xa_[(g * A + a) * B + (t - 1)];
        if (xa > kMassTol)
          out.push_back({static_cast<int>(j), a, rest * c * (xa / xs)});
      }
    }
    double idle = rest * (1.0 - started);
    if (idle > 0.0) out.push_back({-1, 0, idle});
  }
  if (out.empty()) out.push_back({-1, 0, 1.0});
  return out;
}

// ---------------------------------------------------------------------------
// Projection
// ---------------------------------------------------------------------------

ProjectionResult project_policy(const FlatModel& fm,
                                const EnumerablePolicy& pol,
                                long long max_states) {
  const int n = static_cast<int>(fm.roots.size());
  const int B = fm.budget();
  const bool preemptive = fm.mode == Mode::kPreemptive;

  BuiltLp lp = build_relaxation(fm);
  const VarIndex& vix = lp.vix;

  JointSpace space;
  space.radix.resize(n);
  space.stride.resize(n);
  long long states = 1;
  for (int i = 0; i < n; ++i) {
    int size = (i + 1 < n ? fm.base[i + 1] : fm.num_nodes) - fm.base[i];
    space.radix[i] = size + 1;
    space.stride[i] = states;
    if (states > max_states / space.radix[i])
      throw CapacityError("project_policy: joint space exceeds " +
                          std::to_string(max_states) + " states");
    states *= space.radix[i];
  }
  space.num_states = states;

  auto settle = [&](std::vector<int>* pos, int played) {
    if (preemptive) return;
    for (int i = 0; i < n; ++i) {
      int& p = (*pos)[i];
      if (i == played || p == JointSpace::kGone) continue;
      if (fm.base[i] + p != fm.roots[i]) p = JointSpace::kGone;
    }
  };

  // Enumerates (next joint state, probability) pairs of one move.
  auto for_each_outcome = [&](const std::vector<int>& pos, const MoveProb& mv,
                              auto&& receive) {
    std::vector<int> tmp;
    if (mv.arm < 0) {
      tmp = pos;
      settle(&tmp, -1);
      receive(tmp, 1.0);
      return;
    }
    int g = fm.base[mv.arm] + pos[mv.arm];
    const std::vector<FlatEdge>& edges = fm.succ[g][mv.action];
    if (edges.empty()) {
      tmp = pos;
      tmp[mv.arm] = JointSpace::kGone;
      settle(&tmp, mv.arm);
      receive(tmp, 1.0);
      return;
    }
    for (const FlatEdge& e : edges) {
      tmp = pos;
      tmp[mv.arm] = e.to - fm.base[mv.arm];
      settle(&tmp, mv.arm);
      receive(tmp, e.prob);
    }
  };

  ProjectionResult res;
  res.vix = vix;
  res.values.assign(static_cast<size_t>(vix.total()), 0.0);

  // Forward pass: layers[t-1] = state distribution at the beginning of step t.
  std::vector<std::unordered_map<long long, double>> layers(
      static_cast<size_t>(B) + 1);
  {
    std::vector<int> start(n);
    for (int i = 0; i < n; ++i) start[i] = fm.roots[i] - fm.base[i];
    layers[0][space.encode(start)] = 1.0;
  }
  std::vector<int> pos, nodes(n);
  for (int t = 1; t <= B; ++t) {
    for (const auto& [state, p] : layers[t - 1]) {
      space.decode(state, &pos);
      for (int i = 0; i < n; ++i) {
        nodes[i] = pos[i] == JointSpace::kGone ? -1 : fm.base[i] + pos[i];
        if (nodes[i] >= 0) res.values[vix.s(nodes[i], t)] += p;
      }
      std::vector<MoveProb> moves = pol.move_distribution(nodes, t);
      double total = 0.0;
      for (const MoveProb& mv : moves) {
        if (mv.prob < 0.0)
          throw std::runtime_error("project_policy: negative move chance");
        total += mv.prob;
        if (mv.prob == 0.0) continue;
        if (mv.arm >= 0) {
          if (pos[mv.arm] == JointSpace::kGone)
            throw std::runtime_error(
                "project_policy: the policy plays a retired arm");
          res.values[vix.x(fm.base[mv.arm] + pos[mv.arm], mv.action, t)] +=
              p * mv.prob;
        }
        for_each_outcome(pos, mv, [&](const std::vector<int>& nxt, double q) {
          layers[t][space.encode(nxt)] += p * mv.prob * q;
        });
      }
      if (std::abs(total - 1.0) > 1e-9)
        throw std::runtime_error(
            "project_policy: move chances sum to " + std::to_string(total));
    }
  }

  // Objective under the relaxation's reward vector.
  for (int col = 0; col < lp.prob.num_vars; ++col)
    res.objective += lp.prob.objective[col] * res.values[col];

  // Row residuals.
  for (size_t r = 0; r < lp.prob.rows.size(); ++r) {
    const LpRow& row = lp.prob.rows[r];
    double lhs = 0.0;
    for (const LpTerm& term : row.terms)
      lhs += term.coef * res.values[term.col];
    double viol = row.rel == Rel::kEq ? std::abs(lhs - row.rhs)
                                      : std::max(0.0, lhs - row.rhs);
    if (viol > res.max_violation) {
      res.max_violation = viol;
      res.worst_row = r < lp.row_names.size() ? lp.row_names[r] : "";
    }
  }

  // Independent backward evaluation over the same reachable layers.
  std::unordered_map<long long, double> value_next;  // at t+1
  for (int t = B; t >= 1; --t) {
    std::unordered_map<long long, double> value_here;
    value_here.reserve(layers[t - 1].size());
    for (const auto& [state, p] : layers[t - 1]) {
      (void)p;
      space.decode(state, &pos);
      for (int i = 0; i < n; ++i)
        nodes[i] = pos[i] == JointSpace::kGone ? -1 : fm.base[i] + pos[i];
      double v = 0.0;
      for (const MoveProb& mv : pol.move_distribution(nodes, t)) {
        if (mv.prob <= 0.0) continue;
        double inner = 0.0;
        if (mv.arm >= 0)
          inner += fm.reward[fm.base[mv.arm] + pos[mv.arm]][mv.action];
        for_each_outcome(pos, mv, [&](const std::vector<int>& nxt, double q) {
          if (t == B) return;
          auto it = value_next.find(space.encode(nxt));
          if (it != value_next.end()) inner += q * it->second;
        });
        v += mv.prob * inner;
      }
      value_here[state] = v;
    }
    value_next.swap(value_here);
  }
  {
    std::vector<int> start(n);
    for (int i = 0; i < n; ++i) start[i] = fm.roots[i] - fm.base[i];
    res.expected_value = value_next[space.encode(start)];
  }
  res.objective_match = std::abs(res.objective - res.expected_value) <=
                        1e-9 * (1.0 + std::abs(res.objective));
  return res;
}

// ---------------------------------------------------------------------------
// Gap report
// ---------------------------------------------------------------------------

GapReport projection_gap(const Instance& raw, const DpOptions& opts) {
  FlatModel fm = flatten(prepare(raw));
  GapReport rep;
  if (!raw.jobs.empty()) {
    JobLp jl = build_knapsack_lp(raw.jobs, raw.budget);
    rep.relax = solve_relaxation(jl.prob, jl.row_names).objective;
  } else {
    BuiltLp lp = build_relaxation(fm);
    rep.relax = solve_relaxation(lp.prob, lp.row_names).objective;
  }
  DpOptions dopts = opts;
  dopts.keep_decisions = false;
  rep.exact = dp_exact(fm, dopts).value;
  if (rep.exact > kMassTol) {
    rep.ratio = rep.relax / rep.exact;
  } else if (rep.relax <= kMassTol) {
    rep.ratio = 1.0;
  } else {
    rep.ratio = std::numeric_limits<double>::infinity();
    rep.infinite = true;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Grind bound
// ---------------------------------------------------------------------------

double grind_beta(double r, double p_max) {
  if (r < 0.0 || p_max < 0.0 || p_max > 1.0)
    throw std::invalid_argument("grind_beta: need r >= 0 and p_max in [0,1]");
  if (r <= 0.0) return 0.0;
  if (p_max <= 0.0)
    throw std::invalid_argument(
        "grind_beta: positive mass needs a positive chunk size");
  long k = static_cast<long>(std::floor(r / p_max + 1e-9));
  double rem = clamp01(r - static_cast<double>(k) * p_max);
  return 1.0 - std::pow(1.0 - p_max, static_cast<double>(k)) * (1.0 - rem);
}

double grind_bound(std::vector<double> mus, double t) {
  if (t <= 0.0) throw std::invalid_argument("grind_bound: horizon must be positive");
  double sum = 0.0;
  for (double& m : mus) {
    if (m < -1e-15) throw std::invalid_argument("grind_bound: negative mean");
    m = std::max(m, 0.0);
    sum += m;
  }
  if (sum > t / 3.0 + 1e-9)
    throw std::invalid_argument("grind_bound: total mean above t/3");

  // Merge down to three piles, two smallest first; with at least four piles
  // the two smallest together stay below t/6, so the cap is preserved.
  while (mus.size() > 3) {
    std::sort(mus.begin(), mus.end(), std::greater<double>());
    double merged = mus[mus.size() - 2] + mus.back();
    mus.pop_back();
    mus.back() = merged;
  }
  mus.resize(3, 0.0);
  std::sort(mus.begin(), mus.end(), std::greater<double>());
  for (double m : mus)
    if (m > t / 6.0 + 1e-9)
      throw std::invalid_argument("grind_bound: a mean exceeds t/6");

  double h = t / 2.0;
  double all3 =
      1.0 - (1.0 - mus[0] / h) * (1.0 - mus[1] / h) * (1.0 - mus[2] / h);
  double top2 = 1.0 - (1.0 - mus[0] / (h - mus[2])) *
                          (1.0 - mus[1] / (h - mus[2]));
  double top1 = mus[0] / (h - mus[1] - mus[2]);
  return std::max({all3, top2, top1});
}

GrindSweep grind_sweep(int resolution) {
  if (resolution < 6)
    throw std::invalid_argument("grind_sweep: resolution below 6");
  const double t = 6.0;  // scale-invariant; any positive horizon works
  const double step = t / resolution;
  const int cap = resolution / 6;  // per-pile cap t/6
  GrindSweep sw;
  std::vector<double> mus(3);
  for (int i1 = 0; i1 <= cap; ++i1)
    for (int i2 = 0; i2 <= i1; ++i2)
      for (int i3 = 0; i3 <= i2; ++i3) {
        if ((i1 + i2 + i3) * step > t / 3.0 + 1e-12) continue;
        mus[0] = i1 * step;
        mus[1] = i2 * step;
        mus[2] = i3 * step;
        double b = grind_bound(mus, t);
        ++sw.evaluations;
        if (b > sw.best) {
          sw.best = b;
          sw.at = {mus[0], mus[1], mus[2]};
        }
      }
  return sw;
}

}  // namespace banditgap
