#pragma once

#include <cstdint>
#include <vector>

#include "parcheck/engine.hpp"
#include "parcheck/lasso.hpp"
#include "parcheck/verdict.hpp"

namespace parcheck {

/// Per-worker adjacency cache, index-aligned with the engine's visited
/// tables. Filled during generation, reused by later passes so the source is
/// enumerated once.
struct WorkerGraph {
  std::vector<std::vector<StateDescriptor>> succs;
  std::vector<bool> accepting;

  void grow(std::size_t n) {
    if (succs.size() < n) {
      succs.resize(n);
      accepting.resize(n, false);
    }
  }
};

/// All states held in the engine's visited tables, worker by worker.
inline std::vector<StateDescriptor> collect_states(Engine& eng) {
  std::vector<StateDescriptor> out;
  for (int i = 0; i < eng.worker_count(); ++i) {
    Worker& w = eng.worker(i);
    for (std::uint32_t idx = 0; idx < w.size(); ++idx)
      out.push_back(w.state_at(idx));
  }
  return out;
}

inline std::uint64_t total_interned(Engine& eng) {
  std::uint64_t n = 0;
  for (int i = 0; i < eng.worker_count(); ++i) n += eng.worker(i).size();
  return n;
}

}  // namespace parcheck
