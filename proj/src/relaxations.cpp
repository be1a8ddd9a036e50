#include "banditgap/relaxations.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace banditgap {

namespace {

// Shared scaffolding of the two arm-level relaxations; `pausing` selects
// whether unplayed occupation at non-roots survives to the next time.
BuiltLp build_arm_lp(const FlatModel& fm, bool pausing) {
  BuiltLp out;
  VarIndex& vix = out.vix;
  vix.G = fm.num_nodes;
  vix.A = fm.num_actions();
  vix.B = fm.budget();
  LpProblem& p = out.prob;
  p.num_vars = vix.total();
  p.objective.assign(p.num_vars, 0.0);

  const int G = vix.G, A = vix.A, B = vix.B;
  std::set<int> roots(fm.roots.begin(), fm.roots.end());

  for (int g = 0; g < G; ++g)
    for (int a = 0; a < A; ++a) {
      if (!fm.playable(g, a)) continue;
      for (int t = 1; t <= B; ++t)
        p.objective[vix.x(g, a, t)] = fm.reward[g][a];
    }

  auto add_row = [&](LpRow row, std::string name) {
    p.rows.push_back(std::move(row));
    out.row_names.push_back(std::move(name));
  };

  // Unit capacity per time step.
  for (int t = 1; t <= B; ++t) {
    LpRow row;
    row.rel = Rel::kLe;
    row.rhs = 1.0;
    for (int g = 0; g < G; ++g)
      for (int a = 0; a < A; ++a)
        if (fm.playable(g, a)) row.terms.push_back({vix.x(g, a, t), 1.0});
    add_row(std::move(row), "capacity t=" + std::to_string(t));
  }

  // Play mass versus occupation; bridge nodes are locked to equality so a
  // chain in progress cannot idle.
  for (int g = 0; g < G; ++g) {
    bool any = false;
    for (int a = 0; a < A; ++a) any = any || fm.playable(g, a);
    if (!any) continue;
    for (int t = 1; t <= B; ++t) {
      LpRow row;
      row.rhs = 0.0;
      if (fm.bridge[g]) {
        row.rel = Rel::kEq;
        row.terms.push_back({vix.x(g, kDefaultAction, t), 1.0});
      } else {
        row.rel = Rel::kLe;
        for (int a = 0; a < A; ++a)
          if (fm.playable(g, a)) row.terms.push_back({vix.x(g, a, t), 1.0});
      }
      row.terms.push_back({vix.s(g, t), -1.0});
      add_row(std::move(row),
              std::string(fm.bridge[g] ? "lock" : "occupancy") +
                  " g=" + std::to_string(g) + " t=" + std::to_string(t));
    }
  }

  // Initial occupation: all mass on the roots.
  for (int root : fm.roots) {
    LpRow row;
    row.rel = Rel::kEq;
    row.rhs = 1.0;
    row.terms.push_back({vix.s(root, 1), 1.0});
    add_row(std::move(row), "init root g=" + std::to_string(root));
  }
  {
    LpRow row;
    row.rel = Rel::kEq;
    row.rhs = 0.0;
    for (int g = 0; g < G; ++g)
      if (!roots.count(g)) row.terms.push_back({vix.s(g, 1), 1.0});
    if (!row.terms.empty()) add_row(std::move(row), "init others");
  }

  // Flow balance from t to t+1.
  for (int g = 0; g < G; ++g) {
    bool is_root = roots.count(g) > 0;
    for (int t = 1; t <= B - 1; ++t) {
      LpRow row;
      row.rel = Rel::kEq;
      row.rhs = 0.0;
      row.terms.push_back({vix.s(g, t + 1), 1.0});
      if (pausing || is_root) {
        // Survivors: occupation not spent on plays stays in place.
        row.terms.push_back({vix.s(g, t), -1.0});
        for (int a = 0; a < A; ++a)
          if (fm.playable(g, a)) row.terms.push_back({vix.x(g, a, t), 1.0});
      }
      // Fresh inflow from played parents.
      for (const auto& pe : fm.parents[g])
        if (fm.playable(pe.from, pe.action))
          row.terms.push_back({vix.x(pe.from, pe.action, t), -pe.prob});
      add_row(std::move(row), "flow g=" + std::to_string(g) +
                                  " t=" + std::to_string(t + 1));
    }
  }

  // One aggregate pin: play variables of unplayable pairs are all zero.
  {
    LpRow row;
    row.rel = Rel::kEq;
    row.rhs = 0.0;
    for (int g = 0; g < G; ++g)
      for (int a = 0; a < A; ++a)
        if (!fm.playable(g, a))
          for (int t = 1; t <= B; ++t)
            row.terms.push_back({vix.x(g, a, t), 1.0});
    if (!row.terms.empty()) add_row(std::move(row), "pin unplayable");
  }

  return out;
}

}  // namespace

BuiltLp build_poly_lp(const FlatModel& fm) { return build_arm_lp(fm, true); }

BuiltLp build_poly_lp_nopreempt(const FlatModel& fm) {
  return build_arm_lp(fm, false);
}

BuiltLp build_relaxation(const FlatModel& fm) {
  return fm.mode == Mode::kPreemptive ? build_poly_lp(fm)
                                            : build_poly_lp_nopreempt(fm);
}

ErTable build_er_table(const std::vector<KnapsackJob>& jobs, int budget) {
  ErTable tab;
  tab.budget = budget;
  const int n = static_cast<int>(jobs.size());
  tab.er.assign(n, std::vector<double>(budget, 0.0));
  tab.survival.assign(n, std::vector<double>(budget + 1, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int t = 1; t <= budget; ++t)
      for (const JobOutcome& o : jobs[i].outcomes)
        if (t + o.size - 1 <= budget) tab.er[i][t - 1] += o.prob * o.reward;
    for (int d = 0; d <= budget; ++d) tab.survival[i][d] = jobs[i].survival(d);
  }
  return tab;
}

JobLp build_knapsack_lp(const std::vector<KnapsackJob>& jobs, int budget) {
  JobLp out;
  out.num_jobs = static_cast<int>(jobs.size());
  out.B = budget;
  ErTable tab = build_er_table(jobs, budget);
  LpProblem& p = out.prob;
  p.num_vars = out.num_jobs * budget;
  p.objective.assign(p.num_vars, 0.0);
  for (int i = 0; i < out.num_jobs; ++i)
    for (int t = 1; t <= budget; ++t)
      p.objective[out.x(i, t)] = tab.er[i][t - 1];

  // Expected occupancy at each time: a job started at t' is still being
  // served at t with probability survival(t - t').
  for (int t = 1; t <= budget; ++t) {
    LpRow row;
    row.rel = Rel::kLe;
    row.rhs = 1.0;
    for (int i = 0; i < out.num_jobs; ++i)
      for (int tp = 1; tp <= t; ++tp) {
        double surv = tab.survival[i][t - tp];
        if (surv > 0.0) row.terms.push_back({out.x(i, tp), surv});
      }
    p.rows.push_back(std::move(row));
    out.row_names.push_back("busy t=" + std::to_string(t));
  }
  for (int i = 0; i < out.num_jobs; ++i) {
    LpRow row;
    row.rel = Rel::kLe;
    row.rhs = 1.0;
    for (int t = 1; t <= budget; ++t) row.terms.push_back({out.x(i, t), 1.0});
    p.rows.push_back(std::move(row));
    out.row_names.push_back("start-budget job=" + std::to_string(i));
  }
  return out;
}

RelaxSolution solve_relaxation(const LpProblem& prob,
                               const std::vector<std::string>& row_names,
                               const SolveOptions& opts) {
  LpSolution s = solve_lp(prob, opts);
  if (s.status != LpStatus::kOptimal)
    throw std::runtime_error(
        s.status == LpStatus::kInfeasible
            ? "relaxation unexpectedly infeasible"
            : "relaxation unexpectedly unbounded");
  double gap = std::abs(s.objective - s.dual_objective);
  if (gap > 1e-7 * (1.0 + std::abs(s.objective)))
    throw std::runtime_error("relaxation certificate failed: duality gap " +
                             std::to_string(gap));
  for (size_t i = 0; i < prob.rows.size(); ++i) {
    const LpRow& row = prob.rows[i];
    double lhs = 0.0;
    for (const LpTerm& t : row.terms) lhs += t.coef * s.values[t.col];
    double slack = row.rhs - lhs;
    bool ok = row.rel == Rel::kLe ? slack >= -1e-9 * (1.0 + std::abs(row.rhs))
                                  : std::abs(slack) <=
                                        1e-9 * (1.0 + std::abs(row.rhs));
    if (!ok) {
      std::string name =
          i < row_names.size() ? row_names[i] : std::to_string(i);
      throw std::runtime_error("relaxation certificate failed: row " + name +
                               " violated by " + std::to_string(slack));
    }
  }
  RelaxSolution out;
  out.objective = s.objective;
  out.iterations = s.iterations;
  out.values = std::move(s.values);
  for (double& v : out.values) {
    if (v > -1e-9 && v < 0.0) v = 0.0;
    if (v < -1e-9 || v > 1.0 + 1e-9)
      throw std::runtime_error(
          "relaxation value outside the unit interval: " + std::to_string(v));
    if (v > 1.0) v = 1.0;
  }
  return out;
}

}  // namespace banditgap
