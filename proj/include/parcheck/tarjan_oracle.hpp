#pragma once

#include <deque>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "parcheck/graph_source.hpp"
#include "parcheck/lasso.hpp"
#include "parcheck/scc.hpp"
#include "parcheck/verdict.hpp"

namespace parcheck {

/// Sequential ground truth: explore everything reachable, compute SCCs with
/// the iterative Tarjan routine, and report a counterexample iff some
/// reachable SCC is nontrivial (size >= 2, or a single state with a
/// self-loop) and contains an accepting state.
inline Verdict tarjan_oracle(const GraphSource& g) {
  Verdict verdict;
  if (!g.accepting_possible()) return verdict;

  std::unordered_map<StateDescriptor, std::uint32_t, DescriptorHash> index;
  std::vector<StateDescriptor> states;
  std::vector<std::vector<std::uint32_t>> adj;
  std::vector<std::uint32_t> parent;  // BFS tree, for model-error traces

  auto intern = [&](const StateDescriptor& d, std::uint32_t from) {
    auto [it, fresh] = index.emplace(d, static_cast<std::uint32_t>(states.size()));
    if (fresh) {
      states.push_back(d);
      adj.emplace_back();
      parent.push_back(from);
    }
    return it->second;
  };

  constexpr std::uint32_t kNoParent = 0xffffffffu;
  intern(g.initial(), kNoParent);
  for (std::uint32_t u = 0; u < states.size(); ++u) {
    Expansion e = g.successors(states[u]);
    verdict.stats.edges_traversed += e.states.size();
    if (!e.ok()) {
      verdict.kind = VerdictKind::ModelError;
      verdict.message = e.error;
      std::vector<StateDescriptor> trace;
      for (std::uint32_t cur = u; cur != kNoParent; cur = parent[cur])
        trace.push_back(states[cur]);
      verdict.trace.assign(trace.rbegin(), trace.rend());
      verdict.stats.states_visited = states.size();
      return verdict;
    }
    for (const StateDescriptor& v : e.states) {
      std::uint32_t vi = intern(v, u);  // may grow adj
      adj[u].push_back(vi);
    }
  }
  verdict.stats.states_visited = states.size();

  SccResult sccs = compute_sccs(adj);
  std::vector<std::uint32_t> scc_size(sccs.count, 0);
  for (std::uint32_t c : sccs.component) ++scc_size[c];

  bool found = false;
  for (std::uint32_t u = 0; u < states.size() && !found; ++u) {
    if (!g.is_accepting(states[u])) continue;
    if (scc_size[sccs.component[u]] >= 2) {
      found = true;
    } else {
      for (std::uint32_t v : adj[u])
        if (v == u) {
          found = true;
          break;
        }
    }
  }
  if (!found) return verdict;

  auto lasso = find_accepting_lasso(g, states);
  if (!lasso)
    throw std::logic_error("tarjan_oracle: SCC analysis found an accepting cycle "
                           "but extraction failed");
  normalize_lasso(*lasso);
  verdict.kind = VerdictKind::Counterexample;
  verdict.lasso = std::move(*lasso);
  return verdict;
}

}  // namespace parcheck
