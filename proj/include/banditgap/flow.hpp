#pragma once

#include <vector>

#include "banditgap/model.hpp"
#include "banditgap/relaxations.hpp"

namespace banditgap {

// One next-play option inside an arrival group.
struct FlowPlay {
  int action = 0;
  int t = 0;       // time of the next play
  double q = 0.0;  // probability conditioned on the arrival
};

// An "arrival group" collects the relaxation mass that reaches child_g via
// one specific parent play: node parent_g played with parent_action at
// parent_t. Roots get a synthetic start group (parent_g = -1, parent_t = 0)
// carrying their full initial occupation. The group's play list conditions
// what a policy does next after that arrival; q_abandon is the mass that the
// relaxation never plays again.
struct FlowGroup {
  int parent_g = -1;
  int parent_action = -1;
  int parent_t = 0;
  int child_g = -1;
  double mass = 0.0;
  std::vector<FlowPlay> plays;
  double q_abandon = 1.0;
};

struct FlowDecomposition {
  std::vector<FlowGroup> groups;
  // Lookup helpers; nullptr when the group carries no mass.
  const FlowGroup* group_of(int parent_g, int parent_action, int parent_t,
                            int child_g) const;
  const FlowGroup* start_group(int root_g) const;
};

// Splits a relaxation solution's play mass into per-arrival conditional
// distributions, greedily: child plays are swept in time order (action
// ascending within a time), each drawing from the oldest eligible arrival
// (ties toward the lowest parent node, then action). Under pausing dynamics
// a play may draw on any earlier arrival; under abandonment dynamics only on
// arrivals of the immediately preceding step (start groups stay eligible
// throughout, since initial occupation pauses at the root in both).
// Throws if the values cannot be decomposed, which a certified relaxation
// solution always can.
FlowDecomposition flow_decompose(const FlatModel& fm, const VarIndex& vix,
                                 const std::vector<double>& values,
                                 bool pausing);

}  // namespace banditgap
