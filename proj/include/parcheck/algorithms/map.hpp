#pragma once

#include <mutex>
#include <optional>

#include "parcheck/algorithms/common.hpp"

namespace parcheck {

/// Maximal-accepting-predecessor propagation. The ordering key of a state is
/// its full descriptor, compared lexicographically, so keys are total,
/// deterministic and independent of the partitioning.
///
/// Each iteration propagates map_val(v) = max over predecessors u of
/// (map_val(u), key(u) if u is an active accepting state) to a fixpoint. A
/// propagated value equal to the key of the accepting state it reaches proves
/// that state reaches itself: counterexample. Otherwise every accepting state
/// whose key appears in the map image cannot lie on an accepting cycle and is
/// deactivated before the next iteration; the run holds when no active
/// accepting state remains or nothing propagates.
///
/// Propagation runs in snapshot-synchronized rounds: values sent in round r
/// are computed from round r-1 state, so the round at which anything fires is
/// a function of the graph alone, not of worker count, driver or schedule.
/// The first iteration doubles as graph generation and can fire before
/// exploration completes.
class MapRunner {
 public:
  MapRunner(Engine& eng, WorkerGraph* graphs) : eng_(eng), graphs_(graphs) {}

  /// Runs at most `max_iterations` iterations (0 = unbounded). Returns the
  /// verdict when decided; std::nullopt when the iteration budget ran out
  /// without a decision (used by the combined MAP+OWCTY phase 1).
  std::optional<Verdict> run(std::uint64_t max_iterations, std::uint64_t* iterations_out) {
    const int k = eng_.worker_count();
    recs_.resize(static_cast<std::size_t>(k));
    updated_.resize(static_cast<std::size_t>(k));

    std::uint64_t iteration = 0;
    bool first = true;
    for (;;) {
      ++iteration;
      bool seeded = seed_iteration(first);
      if (!seeded) {
        // no active accepting state can propagate anything: no cycle left
        if (iterations_out) *iterations_out = iteration;
        return holds(iteration);
      }
      run_rounds(first);
      first = false;
      if (iterations_out) *iterations_out = iteration;
      if (eng_.stopped()) {
        if (eng_.model_error()) {
          Verdict v;
          v.stats = eng_.collect_stats();
          v.stats.outer_iterations = iteration;
          return v;
        }
        return fire_verdict(iteration);
      }
      if (!deactivate_image()) return holds(iteration);
      if (max_iterations != 0 && iteration >= max_iterations) return std::nullopt;
    }
  }

 private:
  struct Rec {
    StateDescriptor map_val;  // empty = no accepting predecessor seen yet
    bool accepting = false;
    bool acc_active = false;
    bool expanded = false;
    bool pending = false;  // already on this round's update list
  };

  Verdict holds(std::uint64_t iterations) {
    Verdict v;
    v.stats = eng_.collect_stats();
    v.stats.outer_iterations = iterations;
    return v;
  }

  Verdict fire_verdict(std::uint64_t iterations) {
    Verdict v;
    v.stats = eng_.collect_stats();
    v.stats.outer_iterations = iterations;
    v.kind = VerdictKind::Counterexample;

    const StateDescriptor& s = *fired_;
    auto cycle = bfs_path(eng_.source(), s,
                          [&](const StateDescriptor& d) { return d == s; },
                          nullptr, /*skip_start_check=*/true);
    if (!cycle)
      throw std::logic_error("map: fired state does not reach itself");
    cycle->pop_back();
    v.lasso.cycle = std::move(*cycle);
    StateDescriptor init = eng_.source().initial();
    if (init != s) {
      auto prefix = bfs_path(eng_.source(), init,
                             [&](const StateDescriptor& d) { return d == s; });
      if (!prefix)
        throw std::logic_error("map: fired state unreachable from init");
      prefix->pop_back();
      v.lasso.prefix = std::move(*prefix);
    }
    return v;
  }

  /// Marks the senders for round 1 of an iteration. First iteration: the
  /// initial state (discovery seeds itself). Later iterations: every active
  /// accepting state restarts propagation of its own key.
  bool seed_iteration(bool first) {
    for (int i = 0; i < eng_.worker_count(); ++i) {
      updated_[i].clear();
      auto& rs = recs_[i];
      for (auto& r : rs) {
        r.map_val.clear();
        r.pending = false;
      }
    }
    if (first) return true;
    bool any = false;
    for (int i = 0; i < eng_.worker_count(); ++i) {
      Worker& w = eng_.worker(i);
      for (std::uint32_t idx = 0; idx < w.size(); ++idx) {
        Rec& r = recs_[i][idx];
        if (r.acc_active) {
          r.pending = true;
          updated_[i].push_back(idx);
          any = true;
        }
      }
    }
    return any;
  }

  void run_rounds(bool inject_init) {
    bool inject = inject_init;
    for (;;) {
      Phase round;
      round.begin = [this, inject](Worker& w) { begin_round(w, inject); };
      round.handle = [this](Worker& w, Message&& m) { handle_candidate(w, std::move(m)); };
      eng_.run_phase(round);
      inject = false;
      if (eng_.stopped()) return;
      std::uint64_t pending = 0;
      for (int i = 0; i < eng_.worker_count(); ++i)
        pending += updated_[i].size();
      if (pending == 0) return;
    }
  }

  void begin_round(Worker& w, bool inject_init) {
    auto& list = updated_[w.id()];
    std::vector<std::uint32_t> todo;
    todo.swap(list);
    if (inject_init && w.owns(eng_.source().initial())) {
      // round 1 of iteration 1: inject the initial state as a plain discovery
      w.send(eng_.source().initial());
    }
    WorkerGraph& g = graphs_[w.id()];
    for (std::uint32_t idx : todo) {
      Rec& r = recs_[w.id()][idx];
      r.pending = false;
      if (!r.expanded) {
        Expansion e = w.expand(w.state_at(idx));
        g.grow(w.size());
        g.succs[idx] = std::move(e.states);
        g.accepting[idx] = r.accepting;
        r.expanded = true;
      } else {
        w.note_edges(g.succs[idx].size());
      }
      // forward value as of the end of last round
      const StateDescriptor& key = w.state_at(idx);
      const StateDescriptor& fwd =
          (r.acc_active && key > r.map_val) ? key : r.map_val;
      for (const StateDescriptor& s : g.succs[idx]) w.send(s, 0, 0, fwd);
    }
  }

  void handle_candidate(Worker& w, Message&& m) {
    auto [idx, fresh] = w.intern(m.state);
    auto& rs = recs_[w.id()];
    if (rs.size() < w.size()) rs.resize(w.size());
    Rec& r = rs[idx];
    if (fresh) {
      r.accepting = eng_.source().is_accepting(m.state);
      r.acc_active = r.accepting;
      mark_updated(w, idx, r);
    }
    const StateDescriptor& value = m.aux;
    if (value.empty()) return;
    // A state receiving its own key has a path back to itself through
    // accepting propagation: accepting cycle.
    if (r.accepting && r.acc_active && value == m.state) {
      std::lock_guard<std::mutex> lock(fired_mutex_);
      if (!fired_) fired_ = m.state;
      w.request_stop();
      return;
    }
    if (value > r.map_val) {
      r.map_val = value;
      mark_updated(w, idx, r);
    }
  }

  void mark_updated(Worker& w, std::uint32_t idx, Rec& r) {
    if (r.pending) return;
    r.pending = true;
    updated_[w.id()].push_back(idx);
  }

  /// Deactivate accepting states whose key appears as some map value; they
  /// are maximal accepting predecessors not on any accepting cycle. Returns
  /// false when the iteration is conclusive (HOLDS).
  bool deactivate_image() {
    DescSet image;
    bool any_active = false;
    for (int i = 0; i < eng_.worker_count(); ++i)
      for (const Rec& r : recs_[i])
        if (!r.map_val.empty()) image.insert(r.map_val);
    if (image.empty()) return false;  // nothing propagates: no cycle possible
    for (int i = 0; i < eng_.worker_count(); ++i) {
      Worker& w = eng_.worker(i);
      for (std::uint32_t idx = 0; idx < w.size(); ++idx) {
        Rec& r = recs_[i][idx];
        if (r.acc_active && image.count(w.state_at(idx))) r.acc_active = false;
        if (r.acc_active) any_active = true;
      }
    }
    return any_active;
  }

  Engine& eng_;
  WorkerGraph* graphs_;
  std::vector<std::vector<Rec>> recs_;
  std::vector<std::vector<std::uint32_t>> updated_;
  std::mutex fired_mutex_;
  std::optional<StateDescriptor> fired_;
};

}  // namespace parcheck
