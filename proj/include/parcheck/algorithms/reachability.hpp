#pragma once

#include <functional>
#include <mutex>
#include <optional>

#include "parcheck/algorithms/common.hpp"

namespace parcheck {

/// Partitioned BFS over every reachable state. With an error predicate this
/// doubles as a safety check: the verdict carries a trace to the first state
/// found satisfying the predicate. states_visited equals the size of the
/// reachable set when no predicate fires.
inline Verdict run_reachability_impl(
    Engine& eng, const std::function<bool(const StateDescriptor&)>& predicate,
    std::optional<StateDescriptor>& hit) {
  std::mutex hit_mutex;

  Phase bfs;
  bfs.begin = [&](Worker& w) {
    StateDescriptor init = eng.source().initial();
    if (w.owns(init)) w.send(std::move(init));
  };
  bfs.handle = [&](Worker& w, Message&& m) {
    auto [idx, fresh] = w.intern(m.state);
    (void)idx;
    if (!fresh) return;
    if (predicate && predicate(m.state)) {
      std::lock_guard<std::mutex> lock(hit_mutex);
      if (!hit) hit = m.state;
      w.request_stop();
      return;
    }
    Expansion e = w.expand(m.state);
    for (StateDescriptor& succ : e.states) w.send(std::move(succ));
  };
  eng.run_phase(bfs);

  Verdict v;
  v.stats = eng.collect_stats();
  return v;
}

}  // namespace parcheck
