#pragma once

#include <limits>
#include <optional>

#include "parcheck/algorithms/common.hpp"

namespace parcheck {

/// Negative-cycle formulation: edges leaving accepting states weigh -1, all
/// others 0, so a reachable accepting cycle is exactly a reachable negative
/// cycle. Distances from the initial state are relaxed in synchronized
/// Bellman-Ford rounds over the partitioned graph (candidates sent in round r
/// are computed from round r-1 values).
///
/// Two detection rules, both checked between rounds and both sound:
///  - a relaxation still occurring in round N+1, N being the discovered state
///    count, means some witness walk repeats a state with strict improvement;
///  - a distance below -(discovered accepting count) cannot be realized by
///    any simple path through discovered states.
/// The second rule is what makes the algorithm on-the-fly: a cycle close to
/// the initial state pumps its distances down while discovery is still busy
/// elsewhere. A round with no relaxation at all is the fixpoint: HOLDS.
class NegcRunner {
 public:
  explicit NegcRunner(Engine& eng) : eng_(eng) {}

  Verdict run() {
    const int k = eng_.worker_count();
    recs_.resize(static_cast<std::size_t>(k));
    updated_.resize(static_cast<std::size_t>(k));
    acc_count_.assign(static_cast<std::size_t>(k), 0);

    std::uint64_t rounds = 0;
    bool first = true;
    std::optional<std::pair<int, std::uint32_t>> trigger;
    for (;;) {
      ++rounds;
      Phase round;
      bool inject = first;
      first = false;
      round.begin = [this, inject](Worker& w) {
        if (inject) {
          StateDescriptor init = eng_.source().initial();
          if (w.owns(init))
            w.send(std::move(init), static_cast<std::uint64_t>(0));
        }
        relax_from_updated(w);
      };
      round.handle = [this](Worker& w, Message&& m) { apply_candidate(w, std::move(m)); };
      eng_.run_phase(round);
      if (eng_.stopped()) break;  // model error

      std::uint64_t improvements = 0, discovered = 0, acc_discovered = 0;
      std::int64_t min_dist = 0;
      std::optional<std::pair<int, std::uint32_t>> min_at;
      for (int i = 0; i < k; ++i) {
        improvements += updated_[i].size();
        discovered += eng_.worker(i).size();
        acc_discovered += acc_count_[i];
        for (std::uint32_t idx : updated_[i]) {
          const Rec& r = recs_[i][idx];
          if (!min_at || r.dist < min_dist) {
            min_dist = r.dist;
            min_at = {i, idx};
          }
        }
      }
      if (improvements == 0) break;  // fixpoint, no negative cycle
      if (min_at && min_dist < -static_cast<std::int64_t>(acc_discovered)) {
        trigger = min_at;
        break;
      }
      if (rounds >= discovered + 1) {
        trigger = min_at;
        break;
      }
    }

    Verdict v;
    v.stats = eng_.collect_stats();
    v.stats.outer_iterations = rounds;
    if (eng_.stopped() && eng_.model_error()) return v;
    if (!trigger) return v;

    v.kind = VerdictKind::Counterexample;
    v.lasso = extract(*trigger);
    return v;
  }

 private:
  struct Rec {
    std::int64_t dist = std::numeric_limits<std::int64_t>::max();
    StateDescriptor parent;
    bool accepting = false;
    bool expanded = false;
    bool pending = false;
    std::vector<StateDescriptor> succs;
  };

  void relax_from_updated(Worker& w) {
    auto& list = updated_[w.id()];
    std::vector<std::uint32_t> todo;
    todo.swap(list);
    for (std::uint32_t idx : todo) {
      Rec& r = recs_[w.id()][idx];
      r.pending = false;
      if (!r.expanded) {
        Expansion e = w.expand(w.state_at(idx));
        r.succs = std::move(e.states);
        r.expanded = true;
      } else {
        w.note_edges(r.succs.size());
      }
      std::int64_t out = r.dist + (r.accepting ? -1 : 0);
      for (const StateDescriptor& s : r.succs)
        w.send(s, static_cast<std::uint64_t>(out), 0, w.state_at(idx));
    }
  }

  void apply_candidate(Worker& w, Message&& m) {
    auto [idx, fresh] = w.intern(m.state);
    auto& rs = recs_[w.id()];
    if (rs.size() < w.size()) rs.resize(w.size());
    Rec& r = rs[idx];
    if (fresh) {
      r.accepting = eng_.source().is_accepting(m.state);
      if (r.accepting) ++acc_count_[w.id()];
    }
    std::int64_t cand = static_cast<std::int64_t>(m.a);
    if (cand >= r.dist) return;
    r.dist = cand;
    r.parent = std::move(m.aux);
    if (!r.pending) {
      r.pending = true;
      updated_[w.id()].push_back(idx);
    }
  }

  /// Walk parent handles from the triggering state; within N+1 steps the walk
  /// either repeats a state (that segment is the cycle) or reaches the
  /// initial state. Parent pointers are a snapshot that may have moved on, so
  /// an unusable walk falls back to SCC analysis of the discovered subgraph,
  /// which provably contains an accepting cycle whenever a rule fired.
  Lasso extract(std::pair<int, std::uint32_t> trigger) {
    std::vector<StateDescriptor> walk;
    std::unordered_map<StateDescriptor, std::size_t, DescriptorHash> seen;
    StateDescriptor cur = eng_.worker(trigger.first).state_at(trigger.second);
    std::optional<Lasso> lasso;
    for (;;) {
      auto [it, fresh] = seen.emplace(cur, walk.size());
      if (!fresh) {
        // walk[it->second .. end) is a cycle, backwards
        std::vector<StateDescriptor> cycle(walk.begin() + static_cast<std::ptrdiff_t>(it->second),
                                           walk.end());
        std::reverse(cycle.begin(), cycle.end());
        bool accepting = false;
        for (const StateDescriptor& d : cycle)
          if (eng_.source().is_accepting(d)) accepting = true;
        if (accepting) {
          Lasso l;
          l.cycle = std::move(cycle);
          StateDescriptor init = eng_.source().initial();
          if (init != l.cycle.front()) {
            auto prefix = bfs_path(eng_.source(), init, [&](const StateDescriptor& d) {
              return d == l.cycle.front();
            });
            if (prefix) {
              prefix->pop_back();
              l.prefix = std::move(*prefix);
              lasso = std::move(l);
            }
          } else {
            lasso = std::move(l);
          }
        }
        break;
      }
      walk.push_back(cur);
      int owner = eng_.partition().owner(cur);
      auto idx = eng_.worker(owner).lookup(cur);
      if (!idx) break;
      const Rec& r = recs_[owner][*idx];
      if (r.parent.empty()) break;  // reached the initial state
      cur = r.parent;
    }
    if (!lasso) lasso = find_accepting_lasso(eng_.source(), collect_states(eng_));
    if (!lasso)
      throw std::logic_error("negc: detection fired but no accepting cycle exists "
                             "in the discovered subgraph");
    return std::move(*lasso);
  }

  Engine& eng_;
  std::vector<std::vector<Rec>> recs_;
  std::vector<std::vector<std::uint32_t>> updated_;
  std::vector<std::uint64_t> acc_count_;
};

}  // namespace parcheck
