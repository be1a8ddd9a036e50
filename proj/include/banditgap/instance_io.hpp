#pragma once

#include <string>

#include "banditgap/model.hpp"

namespace banditgap {

// JSON serialization of instances. Two accepted layouts:
//   * full form: {budget, mode, actions, arms:[{root, terminal?, nodes:[...]}]}
//     with nodes referring to each other by id;
//   * job shorthand: {budget, mode: knapsack-*, jobs:[{outcomes:[...]}]},
//     which runs through the job translation on load.
// Probabilities may be plain numbers or exact fractions {"num": 1, "den": 3}.
// Malformed input raises std::runtime_error with a description.
Instance instance_from_json(const std::string& text);
std::string instance_to_json(const Instance& inst, int indent = 2);

Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);

}  // namespace banditgap
