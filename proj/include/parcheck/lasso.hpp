#pragma once

#include <algorithm>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "parcheck/graph_source.hpp"
#include "parcheck/model.hpp"
#include "parcheck/scc.hpp"
#include "parcheck/verdict.hpp"

namespace parcheck {

using DescSet = std::unordered_set<StateDescriptor, DescriptorHash>;

inline bool has_edge(const GraphSource& g, const StateDescriptor& u,
                     const StateDescriptor& v) {
  Expansion e = g.successors(u);
  for (const StateDescriptor& s : e.states)
    if (s == v) return true;
  return false;
}

/// Re-executes the witness against the source, independent of any algorithm
/// state. Returns std::nullopt for a valid lasso, otherwise a description of
/// the first violated invariant.
inline std::optional<std::string> validate_lasso(const Lasso& l, const GraphSource& g) {
  if (l.cycle.empty()) return "empty cycle";
  for (const StateDescriptor& d : l.prefix)
    if (d.size() != g.descriptor_len()) return "descriptor length mismatch";
  for (const StateDescriptor& d : l.cycle)
    if (d.size() != g.descriptor_len()) return "descriptor length mismatch";

  if (l.prefix.empty()) {
    if (l.cycle.front() != g.initial())
      return "empty prefix but initial state not on cycle";
  } else if (l.prefix.front() != g.initial()) {
    return "prefix does not start at the initial state";
  }

  // Every consecutive pair, across the prefix, into the cycle and around it,
  // must be a real edge.
  for (std::size_t i = 0; i + 1 < l.prefix.size(); ++i)
    if (!has_edge(g, l.prefix[i], l.prefix[i + 1])) return "missing edge";
  if (!l.prefix.empty() && !has_edge(g, l.prefix.back(), l.cycle.front()))
    return "missing edge";
  for (std::size_t i = 0; i + 1 < l.cycle.size(); ++i)
    if (!has_edge(g, l.cycle[i], l.cycle[i + 1])) return "missing edge";
  if (!has_edge(g, l.cycle.back(), l.cycle.front())) return "missing edge";

  for (const StateDescriptor& d : l.cycle)
    if (g.is_accepting(d)) return std::nullopt;
  return "no accepting state on cycle";
}

/// Canonical witness shape: the cycle entry is the first cycle state the
/// prefix touches, so the prefix never overlaps the cycle. Extractors that
/// anchor the cycle at an accepting state (and reach it through part of the
/// cycle) are rotated into this form.
inline void normalize_lasso(Lasso& l) {
  if (l.cycle.empty()) return;
  DescSet cycle_states(l.cycle.begin(), l.cycle.end());
  for (std::size_t i = 0; i < l.prefix.size(); ++i) {
    if (!cycle_states.count(l.prefix[i])) continue;
    auto entry = std::find(l.cycle.begin(), l.cycle.end(), l.prefix[i]);
    std::rotate(l.cycle.begin(), entry, l.cycle.end());
    l.prefix.resize(i);
    return;
  }
}

/// BFS from `from` to the first state satisfying `goal`, optionally
/// restricted to `within`. The path includes both endpoints. When
/// `skip_start_check` is set the start state is expanded even if it already
/// satisfies the goal, which is how a cycle from a state back to itself is
/// found.
inline std::optional<std::vector<StateDescriptor>> bfs_path(
    const GraphSource& g, const StateDescriptor& from,
    const std::function<bool(const StateDescriptor&)>& goal,
    const DescSet* within = nullptr, bool skip_start_check = false) {
  if (!skip_start_check && goal(from)) return std::vector<StateDescriptor>{from};

  std::unordered_map<StateDescriptor, StateDescriptor, DescriptorHash> parent;
  std::deque<StateDescriptor> queue;
  parent.emplace(from, StateDescriptor{});
  queue.push_back(from);
  while (!queue.empty()) {
    StateDescriptor u = std::move(queue.front());
    queue.pop_front();
    Expansion e = g.successors(u);
    for (StateDescriptor& v : e.states) {
      if (within && !within->count(v)) continue;
      if (goal(v)) {
        std::vector<StateDescriptor> path{v, u};
        StateDescriptor cur = u;
        for (;;) {
          const StateDescriptor& p = parent.at(cur);
          if (p.empty() && cur == from) break;
          path.push_back(p);
          cur = p;
        }
        std::reverse(path.begin(), path.end());
        return path;
      }
      if (parent.emplace(v, u).second) queue.push_back(std::move(v));
    }
  }
  return std::nullopt;
}

/// Ground-truth lasso construction inside an explicitly known set of states:
/// run Tarjan over the induced subgraph, pick a nontrivial (or self-looping)
/// SCC containing an accepting state, close a cycle through it, and prefix it
/// with a path from the initial state. `states` must be reachable from init
/// and closed enough to contain an accepting cycle whenever one exists.
inline std::optional<Lasso> find_accepting_lasso(
    const GraphSource& g, const std::vector<StateDescriptor>& states) {
  std::unordered_map<StateDescriptor, std::uint32_t, DescriptorHash> index;
  index.reserve(states.size());
  for (std::uint32_t i = 0; i < states.size(); ++i) index.emplace(states[i], i);

  std::vector<std::vector<std::uint32_t>> adj(states.size());
  std::vector<bool> self_loop(states.size(), false);
  for (std::uint32_t i = 0; i < states.size(); ++i) {
    Expansion e = g.successors(states[i]);
    for (const StateDescriptor& v : e.states) {
      auto it = index.find(v);
      if (it == index.end()) continue;
      adj[i].push_back(it->second);
      if (it->second == i) self_loop[i] = true;
    }
  }

  SccResult sccs = compute_sccs(adj);
  std::vector<std::uint32_t> scc_size(sccs.count, 0);
  for (std::uint32_t c : sccs.component) ++scc_size[c];

  for (std::uint32_t i = 0; i < states.size(); ++i) {
    if (!g.is_accepting(states[i])) continue;
    std::uint32_t c = sccs.component[i];
    if (scc_size[c] < 2 && !self_loop[i]) continue;

    DescSet scc_states;
    for (std::uint32_t j = 0; j < states.size(); ++j)
      if (sccs.component[j] == c) scc_states.insert(states[j]);

    auto cycle = bfs_path(g, states[i],
                          [&](const StateDescriptor& d) { return d == states[i]; },
                          &scc_states, /*skip_start_check=*/true);
    if (!cycle) continue;  // detector bug; let the caller hard-fault
    cycle->pop_back();     // drop the duplicated entry state

    Lasso l;
    l.cycle = std::move(*cycle);
    StateDescriptor init = g.initial();
    if (init != states[i]) {
      auto prefix = bfs_path(g, init,
                             [&](const StateDescriptor& d) { return d == states[i]; });
      if (!prefix) continue;
      prefix->pop_back();  // prefix runs to the cycle entry, exclusive
      l.prefix = std::move(*prefix);
    }
    return l;
  }
  return std::nullopt;
}

inline nlohmann::json lasso_json(const Lasso& l, const Model* model = nullptr) {
  nlohmann::json j;
  j["prefix"] = nlohmann::json::array();
  j["cycle"] = nlohmann::json::array();
  for (const StateDescriptor& d : l.prefix) j["prefix"].push_back(to_hex(d));
  for (const StateDescriptor& d : l.cycle) j["cycle"].push_back(to_hex(d));
  if (model) {
    nlohmann::json dec;
    dec["prefix"] = nlohmann::json::array();
    dec["cycle"] = nlohmann::json::array();
    for (const StateDescriptor& d : l.prefix)
      dec["prefix"].push_back(render_state(*model, d));
    for (const StateDescriptor& d : l.cycle)
      dec["cycle"].push_back(render_state(*model, d));
    j["decoded"] = std::move(dec);
  }
  return j;
}

inline Lasso lasso_from_json(const nlohmann::json& j) {
  Lasso l;
  for (const auto& s : j.at("prefix")) l.prefix.push_back(from_hex(s.get<std::string>()));
  for (const auto& s : j.at("cycle")) l.cycle.push_back(from_hex(s.get<std::string>()));
  return l;
}

}  // namespace parcheck
