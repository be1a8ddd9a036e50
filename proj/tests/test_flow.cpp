#include <cmath>
#include <map>

#include "banditgap/flow.hpp"
#include "banditgap/generators.hpp"
#include "banditgap/relaxations.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace banditgap;

namespace {

// Shared identity checks: every group is a probability distribution, the
// groups reconstruct the play mass exactly, and bridge arrivals within the
// horizon never abandon.
void check_identities(const FlatModel& fm, const VarIndex& vix,
                      const std::vector<double>& values,
                      const FlowDecomposition& dec, bool pausing) {
  for (const FlowGroup& g : dec.groups) {
    double total = g.q_abandon;
    for (const FlowPlay& p : g.plays) {
      total += p.q;
      CHECK(p.q >= 0.0);
      if (g.parent_g >= 0) {
        CHECK(p.t >= g.parent_t + 1);
        if (!pausing) CHECK(p.t == g.parent_t + 1);
      }
    }
    CHECK(std::abs(total - 1.0) <= 1e-12);
    if (fm.bridge[g.child_g] && g.parent_t < vix.B)
      CHECK(g.q_abandon <= 1e-9);
  }
  // Reconstruction of x from the groups.
  std::map<std::tuple<int, int, int>, double> recon;
  for (const FlowGroup& g : dec.groups)
    for (const FlowPlay& p : g.plays)
      recon[{g.child_g, p.action, p.t}] += g.mass * p.q;
  for (int g = 0; g < fm.num_nodes; ++g)
    for (int a = 0; a < vix.A; ++a) {
      if (!fm.playable(g, a)) continue;
      for (int t = 1; t <= vix.B; ++t) {
        auto it = recon.find({g, a, t});
        double got = it == recon.end() ? 0.0 : it->second;
        CHECK(std::abs(got - values[vix.x(g, a, t)]) <= 1e-9);
      }
    }
}

}  // namespace

TEST_SUITE_BEGIN("flow");

TEST_CASE("hand-built chain decomposes to unit ratios") {
  auto r = testutil::make_node("r");
  auto a = testutil::make_node("a");
  r.rewards[0] = 1.0;
  r.transitions[0] = {RawTransition{1, 1, 1.0, 0.0}};
  a.rewards[0] = 1.0;
  Instance inst = testutil::one_arm({r, a}, 2, Mode::kPreemptive);
  FlatModel fm = flatten(prepare(inst));
  BuiltLp lp = build_poly_lp(fm);
  const VarIndex& vix = lp.vix;

  std::vector<double> values(vix.total(), 0.0);
  values[vix.s(0, 1)] = 1.0;
  values[vix.x(0, 0, 1)] = 1.0;
  values[vix.s(1, 2)] = 1.0;
  values[vix.x(1, 0, 2)] = 1.0;

  FlowDecomposition dec = flow_decompose(fm, vix, values, true);
  const FlowGroup* start = dec.start_group(0);
  REQUIRE(start != nullptr);
  REQUIRE(start->plays.size() == 1);
  CHECK(start->plays[0].q == doctest::Approx(1.0));
  CHECK(start->q_abandon == doctest::Approx(0.0));

  const FlowGroup* g = dec.group_of(0, 0, 1, 1);
  REQUIRE(g != nullptr);
  CHECK(g->mass == doctest::Approx(1.0));
  REQUIRE(g->plays.size() == 1);
  CHECK(g->plays[0].action == 0);
  CHECK(g->plays[0].t == 2);
  CHECK(g->plays[0].q == doctest::Approx(1.0));
  CHECK(g->q_abandon == doctest::Approx(0.0));

  // Partial continuation leaves abandon mass behind.
  values[vix.x(1, 0, 2)] = 0.4;
  FlowDecomposition dec2 = flow_decompose(fm, vix, values, true);
  const FlowGroup* g2 = dec2.group_of(0, 0, 1, 1);
  REQUIRE(g2 != nullptr);
  CHECK(g2->plays[0].q == doctest::Approx(0.4));
  CHECK(g2->q_abandon == doctest::Approx(0.6));

  // Overdrawn continuation is impossible to decompose.
  values[vix.x(0, 0, 1)] = 0.5;
  values[vix.x(1, 0, 2)] = 1.0;
  CHECK_THROWS_AS((void)flow_decompose(fm, vix, values, true),
                  std::runtime_error);
}

TEST_CASE("identities on a solved abandonment relaxation") {
  Instance prep = prepare(gen_gap2(4, false));
  FlatModel fm = flatten(prep);
  BuiltLp lp = build_poly_lp_nopreempt(fm);
  RelaxSolution sol = solve_relaxation(lp.prob, lp.row_names);
  FlowDecomposition dec = flow_decompose(fm, lp.vix, sol.values, false);
  check_identities(fm, lp.vix, sol.values, dec, false);

  // The unique optimum splits the unit job's start over times 2..5.
  int root1 = fm.roots[1];
  const FlowGroup* start = dec.start_group(root1);
  REQUIRE(start != nullptr);
  REQUIRE(start->plays.size() == 4);
  for (const FlowPlay& p : start->plays) {
    CHECK(p.q == doctest::Approx(0.25).epsilon(1e-7));
    CHECK(p.t >= 2);
  }
  CHECK(start->q_abandon == doctest::Approx(0.0).scale(1.0));

  // The short-outcome landing of the long job is never played again.
  // Find the group arriving at arm 0's unit-time landing node.
  bool found_dead_landing = false;
  for (const FlowGroup& g : dec.groups) {
    if (g.parent_g == fm.roots[0] && !fm.bridge[g.child_g] &&
        g.parent_t == 1) {
      CHECK(g.q_abandon == doctest::Approx(1.0));
      found_dead_landing = true;
    }
  }
  CHECK(found_dead_landing);
}

TEST_CASE("identities on solved pausing relaxations") {
  RandomSpec spec;
  spec.arms = 2;
  spec.budget = 4;
  spec.max_time = 2;
  spec.node_cap = 6;
  spec.num_actions = 2;
  spec.completion_reward_rate = 0.5;
  for (uint64_t seed = 501; seed <= 504; ++seed) {
    Instance raw =
        gen_random_raw(RngStream::root(seed), spec, Mode::kPreemptive);
    FlatModel fm = flatten(prepare(raw));
    BuiltLp lp = build_poly_lp(fm);
    RelaxSolution sol = solve_relaxation(lp.prob, lp.row_names);
    FlowDecomposition dec = flow_decompose(fm, lp.vix, sol.values, true);
    check_identities(fm, lp.vix, sol.values, dec, true);
  }
}

TEST_CASE("identities on random abandonment relaxations") {
  RandomSpec spec;
  spec.arms = 2;
  spec.budget = 4;
  spec.max_time = 2;
  spec.node_cap = 64;
  spec.completion_reward_rate = 0.5;
  for (uint64_t seed = 511; seed <= 514; ++seed) {
    Instance raw =
        gen_random_raw(RngStream::root(seed), spec, Mode::kNonPreemptive);
    FlatModel fm = flatten(prepare(raw));
    BuiltLp lp = build_poly_lp_nopreempt(fm);
    RelaxSolution sol = solve_relaxation(lp.prob, lp.row_names);
    FlowDecomposition dec = flow_decompose(fm, lp.vix, sol.values, false);
    check_identities(fm, lp.vix, sol.values, dec, false);
  }
}

TEST_SUITE_END();
