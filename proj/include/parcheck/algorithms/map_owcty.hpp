#pragma once

#include "parcheck/algorithms/map.hpp"
#include "parcheck/algorithms/owcty.hpp"

namespace parcheck {

/// The default procedure: one MAP propagation pass interleaved with state
/// generation (phase 1, on-the-fly: a counterexample found there ends the run
/// before generation completes), then OWCTY on the graph that phase 1 already
/// built (phase 2). Weak inputs keep OWCTY's two-iteration bound.
inline Verdict run_map_owcty(Engine& eng, std::vector<WorkerGraph>& graphs,
                             bool weak_hint) {
  MapRunner map(eng, graphs.data());
  std::uint64_t map_iterations = 0;
  auto early = map.run(/*max_iterations=*/1, &map_iterations);
  if (early) return *early;

  OwctyRunner owcty(eng, graphs.data(), weak_hint);
  Verdict v = owcty.run(/*pre_generated=*/true);
  v.stats.outer_iterations += map_iterations;
  return v;
}

}  // namespace parcheck
