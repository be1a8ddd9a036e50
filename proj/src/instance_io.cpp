#include "banditgap/instance_io.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace banditgap {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) {
  throw std::runtime_error("instance json: " + what);
}

double parse_prob(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_object()) {
    if (!v.contains("num") || !v.contains("den"))
      fail(where + ": fraction needs num and den");
    double num = v.at("num").get<double>();
    double den = v.at("den").get<double>();
    if (den == 0.0) fail(where + ": fraction with zero denominator");
    return num / den;
  }
  fail(where + ": probability must be a number or {num, den}");
}

Instance parse_full(const json& j, Mode mode, int budget) {
  Instance inst;
  inst.budget = budget;
  inst.mode = mode;
  if (!j.contains("actions")) {
    inst.actions = {"pull"};
  } else {
    for (const auto& a : j.at("actions")) inst.actions.push_back(a.get<std::string>());
    if (inst.actions.empty()) fail("actions list is empty");
  }
  std::map<std::string, int> action_idx;
  for (int a = 0; a < inst.num_actions(); ++a) action_idx[inst.actions[a]] = a;

  for (const auto& ja : j.at("arms")) {
    Arm arm;
    std::map<std::string, int> node_idx;
    if (!ja.contains("nodes") || ja.at("nodes").empty())
      fail("arm without nodes");
    for (const auto& jn : ja.at("nodes")) {
      Node nd;
      nd.id = jn.at("id").get<std::string>();
      nd.is_bridge = jn.value("bridge", false);
      nd.depth = jn.value("depth", -1);
      nd.rewards.assign(inst.num_actions(), 0.0);
      nd.transitions.assign(inst.num_actions(), {});
      if (node_idx.count(nd.id)) fail("duplicate node id " + nd.id);
      node_idx[nd.id] = static_cast<int>(arm.nodes.size());
      arm.nodes.push_back(std::move(nd));
    }
    // Second pass: rewards and transitions, now that every id resolves.
    int u = 0;
    for (const auto& jn : ja.at("nodes")) {
      Node& nd = arm.nodes[u++];
      if (jn.contains("rewards")) {
        for (const auto& [name, val] : jn.at("rewards").items()) {
          auto it = action_idx.find(name);
          if (it == action_idx.end())
            fail("node " + nd.id + ": unknown action " + name);
          nd.rewards[it->second] = val.get<double>();
        }
      }
      if (jn.contains("transitions")) {
        for (const auto& [name, rows] : jn.at("transitions").items()) {
          auto it = action_idx.find(name);
          if (it == action_idx.end())
            fail("node " + nd.id + ": unknown action " + name);
          for (const auto& row : rows) {
            RawTransition t;
            std::string to = row.at("to").get<std::string>();
            auto nit = node_idx.find(to);
            if (nit == node_idx.end())
              fail("node " + nd.id + ": unknown target " + to);
            t.to = nit->second;
            t.time = row.value("time", 1);
            t.prob = parse_prob(row.at("prob"), "node " + nd.id);
            t.reward_on_completion = row.value("completion_reward", 0.0);
            nd.transitions[it->second].push_back(t);
          }
        }
      }
    }
    std::string root = ja.at("root").get<std::string>();
    auto rit = node_idx.find(root);
    if (rit == node_idx.end()) fail("unknown root node " + root);
    arm.root = rit->second;
    if (ja.contains("terminal"))
      arm.terminal_id = ja.at("terminal").get<std::string>();
    inst.arms.push_back(std::move(arm));
  }
  return inst;
}

std::vector<KnapsackJob> parse_jobs(const json& rows) {
  std::vector<KnapsackJob> jobs;
  for (const auto& jj : rows) {
    KnapsackJob job;
    for (const auto& jo : jj.at("outcomes")) {
      JobOutcome o;
      o.size = jo.at("size").get<int>();
      o.prob = parse_prob(jo.at("prob"), "job outcome");
      o.reward = jo.value("reward", 0.0);
      job.outcomes.push_back(o);
    }
    jobs.push_back(std::move(job));
  }
  return jobs;
}

}  // namespace

Instance instance_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("parse error: ") + e.what());
  }
  if (!j.is_object()) fail("top level must be an object");
  if (!j.contains("budget")) fail("missing budget");
  int budget = j.at("budget").get<int>();
  if (!j.contains("mode")) fail("missing mode");
  auto mode = mode_from_name(j.at("mode").get<std::string>());
  if (!mode) fail("unknown mode " + j.at("mode").get<std::string>());

  if (j.contains("arms")) {
    Instance inst = parse_full(j, *mode, budget);
    if (j.contains("jobs")) inst.jobs = parse_jobs(j.at("jobs"));
    return inst;
  }
  if (j.contains("jobs")) {
    if (!non_preemptive(*mode))
      fail("job shorthand requires a knapsack mode");
    auto jobs = parse_jobs(j.at("jobs"));
    Instance inst =
        jobs_to_arms(jobs, budget, *mode == Mode::kKnapsackCancel);
    inst.mode = *mode;
    return inst;
  }
  fail("expected either arms or jobs");
}

std::string instance_to_json(const Instance& inst, int indent) {
  json j;
  j["budget"] = inst.budget;
  j["mode"] = mode_name(inst.mode);
  j["actions"] = inst.actions;
  json arms = json::array();
  for (const Arm& arm : inst.arms) {
    json ja;
    ja["root"] = arm.nodes[arm.root].id;
    if (arm.terminal_id) ja["terminal"] = *arm.terminal_id;
    json nodes = json::array();
    for (const Node& nd : arm.nodes) {
      json jn;
      jn["id"] = nd.id;
      if (nd.is_bridge) jn["bridge"] = true;
      if (nd.depth >= 0) jn["depth"] = nd.depth;
      json rewards = json::object();
      for (int a = 0; a < inst.num_actions(); ++a)
        if (nd.rewards[a] != 0.0) rewards[inst.actions[a]] = nd.rewards[a];
      if (!rewards.empty()) jn["rewards"] = rewards;
      json trans = json::object();
      for (int a = 0; a < inst.num_actions(); ++a) {
        if (nd.transitions[a].empty()) continue;
        json rows = json::array();
        for (const RawTransition& t : nd.transitions[a]) {
          json row;
          row["to"] = arm.nodes[t.to].id;
          if (t.time != 1) row["time"] = t.time;
          row["prob"] = t.prob;
          if (t.reward_on_completion != 0.0)
            row["completion_reward"] = t.reward_on_completion;
          rows.push_back(row);
        }
        trans[inst.actions[a]] = rows;
      }
      if (!trans.empty()) jn["transitions"] = trans;
      nodes.push_back(jn);
    }
    ja["nodes"] = nodes;
    arms.push_back(ja);
  }
  j["arms"] = arms;
  if (!inst.jobs.empty()) {
    json jobs = json::array();
    for (const KnapsackJob& job : inst.jobs) {
      json outcomes = json::array();
      for (const JobOutcome& o : job.outcomes) {
        json jo;
        jo["size"] = o.size;
        jo["prob"] = o.prob;
        jo["reward"] = o.reward;
        outcomes.push_back(jo);
      }
      jobs.push_back(json{{"outcomes", outcomes}});
    }
    j["jobs"] = jobs;
  }
  return j.dump(indent);
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return instance_from_json(ss.str());
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << instance_to_json(inst) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace banditgap
