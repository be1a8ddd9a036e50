// banditgap — command-line front end for the library.
//
// Subcommands: validate, reduce, lp, decompose, policy, dp, gap, check,
// generate. Every command is a thin wrapper over one library entry point;
// with --json the numeric results are printed as a JSON document instead of
// the human-readable text. Exit codes: 0 success / passed check, 1 validation
// or check failure (including unreadable input files), 2 capacity limits
// exceeded, 64 command-line usage errors.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "banditgap/analysis.hpp"
#include "banditgap/dp.hpp"
#include "banditgap/flow.hpp"
#include "banditgap/generators.hpp"
#include "banditgap/instance_io.hpp"
#include "banditgap/lp.hpp"
#include "banditgap/model.hpp"
#include "banditgap/policies.hpp"
#include "banditgap/relaxations.hpp"
#include "banditgap/rng.hpp"
#include "banditgap/sim.hpp"
#include "json.hpp"

namespace {

using banditgap::Instance;
using banditgap::Mode;
using json = nlohmann::ordered_json;

// Human-readable number: short, rounded to 6 significant digits.
std::string fmt6(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

void emit_json(const json& j) { std::cout << j.dump(2) << "\n"; }

// Loads an instance and insists it is structurally valid; violations go to
// stderr and become a validation failure (exit 1).
Instance load_checked(const std::string& path) {
  Instance raw = banditgap::load_instance(path);
  std::vector<banditgap::Violation> vs = banditgap::validate(raw);
  if (!vs.empty()) {
    for (const auto& v : vs) std::cerr << to_string(v) << "\n";
    throw std::runtime_error(path + ": instance failed validation");
  }
  return raw;
}

banditgap::FlatModel flat_of(const Instance& raw) {
  return banditgap::flatten(banditgap::prepare(raw));
}

Mode parse_mode(const std::string& name) {
  std::optional<Mode> m = banditgap::mode_from_name(name);
  if (!m) throw std::runtime_error("unknown mode: " + name);
  return *m;
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

int run_validate(const std::string& path, bool as_json) {
  Instance raw = banditgap::load_instance(path);
  std::vector<banditgap::Violation> vs = banditgap::validate(raw);
  if (as_json) {
    json j;
    j["ok"] = vs.empty();
    j["violations"] = json::array();
    for (const auto& v : vs)
      j["violations"].push_back({{"arm", v.arm},
                                 {"node", v.node},
                                 {"constraint", v.constraint},
                                 {"detail", v.detail}});
    emit_json(j);
  } else if (vs.empty()) {
    std::cout << "valid\n";
  } else {
    for (const auto& v : vs) std::cout << to_string(v) << "\n";
  }
  return vs.empty() ? 0 : 1;
}

// ---------------------------------------------------------------------------
// reduce
// ---------------------------------------------------------------------------

int run_reduce(const std::string& path, const std::string& out, bool as_json) {
  Instance raw = load_checked(path);
  Instance prep = banditgap::prepare(raw);
  std::string doc = banditgap::instance_to_json(prep);
  if (!out.empty()) {
    banditgap::save_instance(prep, out);
    if (!as_json) std::cout << "wrote " << out << "\n";
  }
  if (as_json || out.empty()) std::cout << doc << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// lp
// ---------------------------------------------------------------------------

int run_lp(const std::string& path, std::string variant,
           const std::string& dump, bool as_json) {
  Instance raw = load_checked(path);
  if (variant == "auto")
    variant = !raw.jobs.empty()
                  ? "knapsack"
                  : (raw.mode == Mode::kPreemptive ? "poly" : "poly-nopre");

  banditgap::RelaxSolution sol;
  json vars;
  if (variant == "knapsack") {
    if (raw.jobs.empty())
      throw std::runtime_error(
          "variant knapsack requires a job-backed instance");
    banditgap::JobLp jl = banditgap::build_knapsack_lp(raw.jobs, raw.budget);
    sol = banditgap::solve_relaxation(jl.prob, jl.row_names);
    vars["objective"] = sol.objective;
    vars["x"] = json::array();
    for (int i = 0; i < jl.num_jobs; ++i)
      for (int t = 1; t <= jl.B; ++t) {
        double v = sol.values[jl.x(i, t)];
        if (v > 1e-15)
          vars["x"].push_back({{"job", i}, {"t", t}, {"value", v}});
      }
  } else {
    banditgap::FlatModel fm = flat_of(raw);
    banditgap::BuiltLp lp = variant == "poly"
                                ? banditgap::build_poly_lp(fm)
                                : banditgap::build_poly_lp_nopreempt(fm);
    sol = banditgap::solve_relaxation(lp.prob, lp.row_names);
    vars["objective"] = sol.objective;
    vars["x"] = json::array();
    vars["s"] = json::array();
    for (int g = 0; g < fm.num_nodes; ++g)
      for (int a = 0; a < fm.num_actions(); ++a)
        for (int t = 1; t <= fm.budget(); ++t) {
          double v = sol.values[lp.vix.x(g, a, t)];
          if (v > 1e-15)
            vars["x"].push_back({{"node", fm.node_id(g)},
                                 {"action", a},
                                 {"t", t},
                                 {"value", v}});
        }
    for (int g = 0; g < fm.num_nodes; ++g)
      for (int t = 1; t <= fm.budget(); ++t) {
        double v = sol.values[lp.vix.s(g, t)];
        if (v > 1e-15)
          vars["s"].push_back(
              {{"node", fm.node_id(g)}, {"t", t}, {"value", v}});
      }
  }

  if (!dump.empty()) {
    std::ofstream f(dump);
    if (!f) throw std::runtime_error("cannot write " + dump);
    f << vars.dump(2) << "\n";
  }
  if (as_json) {
    emit_json(json{{"variant", variant},
                   {"objective", sol.objective},
                   {"iterations", sol.iterations}});
  } else {
    std::cout << "variant    " << variant << "\n"
              << "objective  " << fmt6(sol.objective) << "\n"
              << "iterations " << sol.iterations << "\n";
    if (!dump.empty()) std::cout << "wrote " << dump << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// decompose
// ---------------------------------------------------------------------------

int run_decompose(const std::string& path, const std::string& dump,
                  bool as_json) {
  Instance raw = load_checked(path);
  banditgap::FlatModel fm = flat_of(raw);
  banditgap::BuiltLp lp = banditgap::build_relaxation(fm);
  banditgap::RelaxSolution sol =
      banditgap::solve_relaxation(lp.prob, lp.row_names);
  bool pausing = fm.mode == Mode::kPreemptive;
  banditgap::FlowDecomposition fd =
      banditgap::flow_decompose(fm, lp.vix, sol.values, pausing);

  json j;
  j["pausing"] = pausing;
  j["groups"] = json::array();
  for (const auto& g : fd.groups) {
    json plays = json::array();
    for (const auto& p : g.plays)
      plays.push_back({{"action", p.action}, {"t", p.t}, {"q", p.q}});
    j["groups"].push_back(
        {{"parent_node",
          g.parent_g < 0 ? json(nullptr) : json(fm.node_id(g.parent_g))},
         {"parent_action", g.parent_action},
         {"parent_t", g.parent_t},
         {"child_node", fm.node_id(g.child_g)},
         {"mass", g.mass},
         {"q_abandon", g.q_abandon},
         {"plays", plays}});
  }
  if (!dump.empty()) {
    std::ofstream f(dump);
    if (!f) throw std::runtime_error("cannot write " + dump);
    f << j.dump(2) << "\n";
  }
  if (as_json) {
    emit_json(j);
  } else {
    std::cout << "groups " << fd.groups.size() << " (pausing "
              << (pausing ? "yes" : "no") << ")\n";
    for (const auto& g : fd.groups) {
      std::cout << "  ";
      if (g.parent_g < 0)
        std::cout << "start";
      else
        std::cout << fm.node_id(g.parent_g) << " a" << g.parent_action << "@t"
                  << g.parent_t;
      std::cout << " -> " << fm.node_id(g.child_g) << "  mass "
                << fmt6(g.mass) << "  abandon " << fmt6(g.q_abandon)
                << "  plays " << g.plays.size() << "\n";
    }
    if (!dump.empty()) std::cout << "wrote " << dump << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// policy
// ---------------------------------------------------------------------------

// Writes one JSONL line per play; new_status names the node the arm holds
// after the play, or "gone" when it finished or walked away.
class TraceWriter final : public banditgap::StepObserver {
 public:
  TraceWriter(const std::string& path, const banditgap::FlatModel& fm)
      : out_(path), fm_(fm) {
    if (!out_) throw std::runtime_error("cannot write " + path);
  }
  void on_trial_begin(long trial) override { trial_ = trial; }
  void on_step(const banditgap::StepEvent& e) override {
    json line{{"trial", trial_},
              {"clock", e.clock},
              {"arm", e.arm},
              {"node", fm_.node_id(e.node)},
              {"action", e.action},
              {"reward", e.reward},
              {"new_status",
               e.to_node < 0 ? json("gone") : json(fm_.node_id(e.to_node))}};
    out_ << line.dump() << "\n";
  }

 private:
  std::ofstream out_;
  const banditgap::FlatModel& fm_;
  long trial_ = 0;
};

int run_policy(const std::string& path, const std::string& name, long trials,
               uint64_t seed, double epsilon, double delta,
               bool virtual_continue, const std::string& trace, bool as_json) {
  Instance raw = load_checked(path);
  banditgap::FlatModel fm = flat_of(raw);

  banditgap::RelaxSolution sol;
  std::unique_ptr<banditgap::TrialPolicy> pol;
  if (name == "priority27" || name == "priority12") {
    banditgap::BuiltLp lp = banditgap::build_poly_lp(fm);
    sol = banditgap::solve_relaxation(lp.prob, lp.row_names);
    bool bridges = name == "priority12";
    pol = std::make_unique<banditgap::PriorityPolicy>(
        fm, sol, bridges ? 1.0 / 6.0 : 1.0 / 3.0, bridges);
  } else {
    banditgap::BuiltLp lp = banditgap::build_relaxation(fm);
    sol = banditgap::solve_relaxation(lp.prob, lp.row_names);
    if (name == "half-exact") {
      pol = std::make_unique<banditgap::HalfScalingPolicy>(fm, sol);
    } else {  // half-sampled
      double d = delta > 0.0
                     ? delta
                     : epsilon / (fm.budget() *
                                  static_cast<double>(fm.roots.size()));
      pol = std::make_unique<banditgap::HalfScalingPolicy>(
          fm, sol, epsilon, d, banditgap::RngStream::root(seed).child(~0ULL));
    }
  }

  banditgap::SimOptions opts;
  opts.virtual_continue = virtual_continue;
  opts.collect_status = true;
  std::unique_ptr<TraceWriter> tw;
  if (!trace.empty()) {
    tw = std::make_unique<TraceWriter>(trace, fm);
    opts.observer = tw.get();
  }
  banditgap::SimulationReport rep =
      banditgap::simulate(*pol, trials, seed, opts);

  if (as_json) {
    json statuses = json::array();
    for (const auto& [key, c] : rep.status_freq)
      statuses.push_back(
          {{"node", fm.node_id(std::get<0>(key))},
           {"action", std::get<1>(key)},
           {"priority", std::get<2>(key)},
           {"played", c.played},
           {"frequency", static_cast<double>(c.played) / rep.trials},
           {"timely", c.timely}});
    emit_json(json{{"policy", rep.policy_id},
                   {"relaxation_objective", sol.objective},
                   {"trials", rep.trials},
                   {"seed", rep.seed},
                   {"virtual_continue", virtual_continue},
                   {"mean", rep.mean},
                   {"stddev", rep.stddev},
                   {"ci95", rep.ci95},
                   {"statuses", statuses}});
  } else {
    std::cout << "policy     " << rep.policy_id << "\n"
              << "relaxation " << fmt6(sol.objective) << "\n"
              << "trials     " << rep.trials << "\n"
              << "seed       " << rep.seed << "\n"
              << "mean       " << fmt6(rep.mean) << "\n"
              << "stddev     " << fmt6(rep.stddev) << "\n"
              << "ci95       " << fmt6(rep.ci95) << "\n";
    if (!rep.status_freq.empty()) {
      std::cout << "\n  node            action priority   played frequency\n";
      for (const auto& [key, c] : rep.status_freq) {
        std::ostringstream row;
        row << "  " << std::left << std::setw(16)
            << fm.node_id(std::get<0>(key)) << std::right << std::setw(6)
            << std::get<1>(key) << std::setw(9) << std::get<2>(key)
            << std::setw(9) << c.played << std::setw(10)
            << fmt6(static_cast<double>(c.played) / rep.trials);
        std::cout << row.str() << "\n";
      }
    }
    if (!trace.empty()) std::cout << "wrote " << trace << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// dp
// ---------------------------------------------------------------------------

int run_dp(const std::string& path, const std::string& mode_override,
           long long max_states, bool as_json) {
  Instance raw = load_checked(path);
  banditgap::FlatModel fm = flat_of(raw);
  banditgap::DpOptions opts;
  opts.max_states = max_states;
  opts.keep_decisions = false;
  Mode mode = mode_override.empty() ? fm.mode : parse_mode(mode_override);
  banditgap::DpResult r = banditgap::dp_exact(fm, mode, opts);
  if (as_json) {
    emit_json(json{{"value", r.value},
                   {"mode", banditgap::mode_name(mode)},
                   {"states", r.space.num_states}});
  } else {
    std::cout << "value  " << fmt6(r.value) << "\n"
              << "mode   " << banditgap::mode_name(mode) << "\n"
              << "states " << r.space.num_states << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// gap
// ---------------------------------------------------------------------------

int run_gap(const std::string& path, bool as_json) {
  Instance raw = load_checked(path);
  banditgap::GapReport g = banditgap::projection_gap(raw);
  if (as_json) {
    emit_json(json{{"relax", g.relax},
                   {"exact", g.exact},
                   {"ratio", g.ratio},
                   {"infinite", g.infinite}});
  } else {
    const char* label = raw.jobs.empty() ? "LP" : "LP'";
    std::cout << label << " = " << fmt6(g.relax) << "\n"
              << "DP = " << fmt6(g.exact) << "\n"
              << "gap = " << (g.infinite ? std::string("inf") : fmt6(g.ratio))
              << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// check projection / check grind
// ---------------------------------------------------------------------------

int run_check_projection(const std::string& path, const std::string& name,
                         long long max_states, bool as_json) {
  Instance raw = load_checked(path);
  banditgap::FlatModel fm = flat_of(raw);

  banditgap::RelaxSolution sol;
  std::unique_ptr<banditgap::EnumerablePolicy> pol;
  if (name == "dp") {
    pol = std::make_unique<banditgap::DpEnumerablePolicy>(
        fm, banditgap::dp_exact(fm));
  } else if (name == "half-exact") {
    banditgap::BuiltLp lp = banditgap::build_relaxation(fm);
    sol = banditgap::solve_relaxation(lp.prob, lp.row_names);
    banditgap::HalfScalingPolicy half(fm, sol);
    pol = std::make_unique<banditgap::HalfExactEnumerablePolicy>(fm, sol,
                                                                 half);
  } else {  // idle
    pol = std::make_unique<banditgap::IdleEnumerablePolicy>();
  }

  banditgap::ProjectionResult pr =
      banditgap::project_policy(fm, *pol, max_states);
  bool pass = pr.max_violation <= 1e-9 && pr.objective_match;
  if (as_json) {
    emit_json(json{{"policy", name},
                   {"objective", pr.objective},
                   {"expected_value", pr.expected_value},
                   {"objective_match", pr.objective_match},
                   {"max_violation", pr.max_violation},
                   {"worst_row", pr.worst_row},
                   {"pass", pass}});
  } else {
    std::cout << "policy          " << name << "\n"
              << "objective       " << fmt6(pr.objective) << "\n"
              << "expected value  " << fmt6(pr.expected_value) << "\n"
              << "max violation   " << pr.max_violation;
    if (!pr.worst_row.empty()) std::cout << " (" << pr.worst_row << ")";
    std::cout << "\n" << (pass ? "PASS" : "FAIL") << "\n";
  }
  return pass ? 0 : 1;
}

int run_check_grind(int resolution, bool as_json) {
  banditgap::GrindSweep s = banditgap::grind_sweep(resolution);
  const double bound = 5.0 / 9.0;
  bool pass = s.best <= bound + 1e-12 && std::abs(s.best - bound) <= 1e-3;
  if (as_json) {
    emit_json(json{{"max", s.best},
                   {"at", {s.at[0], s.at[1], s.at[2]}},
                   {"bound", bound},
                   {"evaluations", s.evaluations},
                   {"pass", pass}});
  } else {
    std::cout << "max = " << std::setprecision(10) << s.best
              << ", bound 5/9 = " << std::setprecision(10) << bound << ", "
              << (pass ? "PASS" : "FAIL") << "\n";
  }
  return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// generate
// ---------------------------------------------------------------------------

int emit_instance(const Instance& inst, const std::string& out, bool as_json) {
  std::vector<banditgap::Violation> vs = banditgap::validate(inst);
  if (!vs.empty()) {
    for (const auto& v : vs) std::cerr << to_string(v) << "\n";
    throw std::runtime_error("generated instance failed validation");
  }
  if (!out.empty()) {
    banditgap::save_instance(inst, out);
    if (!as_json) std::cout << "wrote " << out << "\n";
  }
  if (as_json || out.empty())
    std::cout << banditgap::instance_to_json(inst) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LP-relaxation policies for budgeted bandits and knapsacks"};
  app.require_subcommand(1);
  int rc = 0;

  // --- validate ---
  auto* c_val = app.add_subcommand("validate", "check instance invariants");
  std::string val_path;
  bool val_json = false;
  c_val->add_option("instance", val_path, "instance file")->required();
  c_val->add_flag("--json", val_json, "JSON output");
  c_val->callback([&] { rc = run_validate(val_path, val_json); });

  // --- reduce ---
  auto* c_red = app.add_subcommand(
      "reduce", "expand multi-period actions and layer the arms");
  std::string red_path, red_out;
  bool red_json = false;
  c_red->add_option("instance", red_path, "instance file")->required();
  c_red->add_option("--out", red_out, "write the reduced instance here");
  c_red->add_flag("--json", red_json, "JSON output");
  c_red->callback([&] { rc = run_reduce(red_path, red_out, red_json); });

  // --- lp ---
  auto* c_lp = app.add_subcommand("lp", "build and solve a relaxation");
  std::string lp_path, lp_variant = "auto", lp_dump;
  bool lp_json = false;
  c_lp->add_option("instance", lp_path, "instance file")->required();
  c_lp->add_option("--variant", lp_variant, "relaxation variant")
      ->check(CLI::IsMember({"auto", "poly", "poly-nopre", "knapsack"}));
  c_lp->add_option("--dump-vars", lp_dump, "write nonzero variables here");
  c_lp->add_flag("--json", lp_json, "JSON output");
  c_lp->callback([&] { rc = run_lp(lp_path, lp_variant, lp_dump, lp_json); });

  // --- decompose ---
  auto* c_dec = app.add_subcommand(
      "decompose", "flow-decompose the relaxation into arrival groups");
  std::string dec_path, dec_dump;
  bool dec_json = false;
  c_dec->add_option("instance", dec_path, "instance file")->required();
  c_dec->add_option("--dump", dec_dump, "write the decomposition here");
  c_dec->add_flag("--json", dec_json, "JSON output");
  c_dec->callback([&] { rc = run_decompose(dec_path, dec_dump, dec_json); });

  // --- policy ---
  auto* c_pol =
      app.add_subcommand("policy", "simulate an approximation policy");
  std::string pol_path, pol_name, pol_trace;
  long pol_trials = 10000;
  uint64_t pol_seed = 42;
  double pol_eps = 0.1, pol_delta = 0.0;
  bool pol_vc = false, pol_json = false;
  c_pol->add_option("instance", pol_path, "instance file")->required();
  c_pol->add_option("--policy", pol_name, "policy name")
      ->required()
      ->check(CLI::IsMember(
          {"priority27", "priority12", "half-exact", "half-sampled"}));
  c_pol->add_option("--trials", pol_trials, "number of Monte Carlo trials")
      ->check(CLI::PositiveNumber);
  c_pol->add_option("--seed", pol_seed, "root seed")
      ->envname("BANDITGAP_SEED");
  c_pol->add_option("--epsilon", pol_eps, "half-sampled accuracy");
  c_pol->add_option("--delta", pol_delta,
                    "half-sampled failure chance (default eps/(B*n))");
  c_pol->add_flag("--virtual-continue", pol_vc,
                  "resolve plays past the budget (reward-free)");
  c_pol->add_option("--trace", pol_trace, "write per-play JSONL here");
  c_pol->add_flag("--json", pol_json, "JSON output");
  c_pol->callback([&] {
    rc = run_policy(pol_path, pol_name, pol_trials, pol_seed, pol_eps,
                    pol_delta, pol_vc, pol_trace, pol_json);
  });

  // --- dp ---
  auto* c_dp = app.add_subcommand("dp", "exact optimum by backward induction");
  std::string dp_path, dp_mode;
  long long dp_states = 2'000'000;
  bool dp_json = false;
  c_dp->add_option("instance", dp_path, "instance file")->required();
  c_dp->add_option("--mode-override", dp_mode,
                   "price the structure under another discipline")
      ->check(CLI::IsMember({"preemptive", "non-preemptive", "knapsack-cancel",
                             "knapsack-nocancel"}));
  c_dp->add_option("--max-states", dp_states, "joint state cap");
  c_dp->add_flag("--json", dp_json, "JSON output");
  c_dp->callback([&] { rc = run_dp(dp_path, dp_mode, dp_states, dp_json); });

  // --- gap ---
  auto* c_gap = app.add_subcommand(
      "gap", "relaxation bound vs exact optimum on one instance");
  std::string gap_path;
  bool gap_json = false;
  c_gap->add_option("instance", gap_path, "instance file")->required();
  c_gap->add_flag("--json", gap_json, "JSON output");
  c_gap->callback([&] { rc = run_gap(gap_path, gap_json); });

  // --- check ---
  auto* c_chk = app.add_subcommand("check", "verification tools");
  c_chk->require_subcommand(1);

  auto* c_proj = c_chk->add_subcommand(
      "projection", "project a policy into the relaxation polytope");
  std::string proj_path, proj_policy = "dp";
  long long proj_states = 2'000'000;
  bool proj_json = false;
  c_proj->add_option("instance", proj_path, "instance file")->required();
  c_proj->add_option("--policy", proj_policy, "enumerable policy")
      ->check(CLI::IsMember({"dp", "half-exact", "idle"}));
  c_proj->add_option("--max-states", proj_states, "joint state cap");
  c_proj->add_flag("--json", proj_json, "JSON output");
  c_proj->callback([&] {
    rc = run_check_projection(proj_path, proj_policy, proj_states, proj_json);
  });

  auto* c_grind = c_chk->add_subcommand(
      "grind", "sweep the three-pile grinding bound for its maximum");
  int grind_res = 600;
  bool grind_json = false;
  c_grind->add_option("--resolution", grind_res, "grid cells per horizon")
      ->check(CLI::PositiveNumber);
  c_grind->add_flag("--json", grind_json, "JSON output");
  c_grind->callback([&] { rc = run_check_grind(grind_res, grind_json); });

  // --- generate ---
  auto* c_gen = app.add_subcommand("generate", "built-in instance families");
  c_gen->require_subcommand(1);

  auto* g_gap2 = c_gen->add_subcommand(
      "gap2", "two-job family whose planning gap approaches 2");
  int gap2_n = 10;
  std::string gap2_out;
  bool gap2_cancel = false, gap2_json = false;
  g_gap2->add_option("n", gap2_n, "family parameter (budget n+1)")
      ->required()
      ->check(CLI::Range(2, 1000000));
  g_gap2->add_flag("--cancellable", gap2_cancel, "expose cancel actions");
  g_gap2->add_option("--out", gap2_out, "write the instance here");
  g_gap2->add_flag("--json", gap2_json, "JSON output");
  g_gap2->callback([&] {
    rc = emit_instance(banditgap::gen_gap2(gap2_n, gap2_cancel), gap2_out,
                       gap2_json);
  });

  auto* g_bench = c_gen->add_subcommand(
      "knapsack-appendix", "three-job benchmark (budget 10)");
  std::string bench_flavor = "cancel", bench_out;
  bool bench_json = false;
  g_bench->add_option("--flavor", bench_flavor, "cancel or commit")
      ->check(CLI::IsMember({"cancel", "commit"}));
  g_bench->add_option("--out", bench_out, "write the instance here");
  g_bench->add_flag("--json", bench_json, "JSON output");
  g_bench->callback([&] {
    rc = emit_instance(banditgap::gen_bench3(bench_flavor == "cancel"),
                       bench_out, bench_json);
  });

  auto* g_rand = c_gen->add_subcommand("random", "random layered arms");
  banditgap::RandomSpec rnd;
  uint64_t rnd_seed = 7;
  std::string rnd_mode = "preemptive", rnd_out;
  bool rnd_json = false;
  g_rand->add_option("--arms", rnd.arms)->check(CLI::PositiveNumber);
  g_rand->add_option("--nodes", rnd.node_cap, "per-arm node budget")
      ->check(CLI::PositiveNumber);
  g_rand->add_option("--actions", rnd.num_actions)->check(CLI::PositiveNumber);
  g_rand->add_option("--budget", rnd.budget)->check(CLI::PositiveNumber);
  g_rand->add_option("--seed", rnd_seed)->envname("BANDITGAP_SEED");
  g_rand->add_option("--mode", rnd_mode)
      ->check(CLI::IsMember({"preemptive", "non-preemptive", "knapsack-cancel",
                             "knapsack-nocancel"}));
  g_rand->add_option("--max-time", rnd.max_time,
                     "longest multi-period transition");
  g_rand->add_option("--max-children", rnd.max_children);
  g_rand->add_option("--action-rate", rnd.action_rate);
  g_rand->add_option("--cross-rate", rnd.cross_edge_rate);
  g_rand->add_option("--completion-rate", rnd.completion_reward_rate);
  g_rand->add_option("--reward-scale", rnd.reward_scale);
  g_rand->add_option("--out", rnd_out, "write the instance here");
  g_rand->add_flag("--json", rnd_json, "JSON output");
  g_rand->callback([&] {
    rc = emit_instance(
        banditgap::gen_random_raw(banditgap::RngStream::root(rnd_seed), rnd,
                                  parse_mode(rnd_mode)),
        rnd_out, rnd_json);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 64;
  } catch (const banditgap::CapacityError& e) {
    std::cerr << "capacity: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
