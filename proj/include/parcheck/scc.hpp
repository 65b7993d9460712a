#pragma once

#include <cstdint>
#include <vector>

namespace parcheck {

/// Strongly connected components of an index-based adjacency list, Tarjan's
/// algorithm with an explicit work stack so deep graphs cannot overflow the
/// call stack. Components are numbered in reverse topological order
/// (a component's successors always have smaller component ids).
struct SccResult {
  std::vector<std::uint32_t> component;  // state -> component id
  std::uint32_t count = 0;
};

inline SccResult compute_sccs(const std::vector<std::vector<std::uint32_t>>& adj) {
  const std::uint32_t n = static_cast<std::uint32_t>(adj.size());
  constexpr std::uint32_t kUnset = 0xffffffffu;

  SccResult res;
  res.component.assign(n, kUnset);
  std::vector<std::uint32_t> index(n, kUnset), lowlink(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::uint32_t> stack;

  struct Frame {
    std::uint32_t v;
    std::uint32_t next_edge;
  };
  std::vector<Frame> work;
  std::uint32_t next_index = 0;

  for (std::uint32_t root = 0; root < n; ++root) {
    if (index[root] != kUnset) continue;
    work.push_back({root, 0});
    index[root] = lowlink[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;

    while (!work.empty()) {
      Frame& f = work.back();
      std::uint32_t v = f.v;
      if (f.next_edge < adj[v].size()) {
        std::uint32_t w = adj[v][f.next_edge++];
        if (index[w] == kUnset) {
          index[w] = lowlink[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          work.push_back({w, 0});
        } else if (on_stack[w]) {
          if (index[w] < lowlink[v]) lowlink[v] = index[w];
        }
      } else {
        if (lowlink[v] == index[v]) {
          std::uint32_t comp = res.count++;
          std::uint32_t w;
          do {
            w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            res.component[w] = comp;
          } while (w != v);
        }
        work.pop_back();
        if (!work.empty()) {
          std::uint32_t parent = work.back().v;
          if (lowlink[v] < lowlink[parent]) lowlink[parent] = lowlink[v];
        }
      }
    }
  }
  return res;
}

}  // namespace parcheck
