#pragma once

#include <mutex>
#include <optional>
#include <unordered_map>

#include "parcheck/algorithms/common.hpp"

namespace parcheck {

/// Back-level-edge detection. A level-synchronized partitioned BFS assigns
/// every state its distance from the initial state; an edge u -> v with
/// level(v) <= level(u) is a back-level edge, and every cycle contains at
/// least one. As each level completes, the back-level edges it produced are
/// checked individually (on-the-fly, before exploration finishes) with a
/// two-flag reachability: can v reach u along a path that, counting u and v
/// themselves, passes an accepting state? If so the cycle u -> v -> ... -> u
/// is accepting.
class BledgeRunner {
 public:
  explicit BledgeRunner(Engine& eng) : eng_(eng) {}

  Verdict run() {
    const int k = eng_.worker_count();
    recs_.resize(static_cast<std::size_t>(k));
    frontier_.resize(static_cast<std::size_t>(k));
    back_edges_.resize(static_cast<std::size_t>(k));

    std::uint64_t levels = 0;
    std::uint64_t back_edge_count = 0, searches = 0;
    std::optional<Lasso> lasso;
    bool first = true;
    for (;;) {
      Phase level;
      bool inject = first;
      first = false;
      level.begin = [this, inject](Worker& w) {
        if (inject) {
          StateDescriptor init = eng_.source().initial();
          if (w.owns(init)) w.send(std::move(init), 0, kSeed);
        }
        expand_frontier(w);
      };
      level.handle = [this](Worker& w, Message&& m) { on_visit(w, std::move(m)); };
      eng_.run_phase(level);
      ++levels;
      if (eng_.stopped()) break;  // model error

      // Check this level's back-level edges before exploring further.
      bool done = false;
      for (int i = 0; i < k && !done; ++i) {
        for (auto& [u, v] : back_edges_[i]) {
          ++back_edge_count;
          ++searches;
          if (auto cycle_path = nested_search(u, v)) {
            lasso = assemble(u, *cycle_path);
            done = true;
            break;
          }
          if (eng_.stopped()) {  // model error inside the nested search
            done = true;
            break;
          }
        }
        back_edges_[i].clear();
      }
      if (done) break;

      std::uint64_t pending = 0;
      for (int i = 0; i < k; ++i) pending += frontier_[i].size();
      if (pending == 0) break;
    }

    Verdict v;
    v.stats = eng_.collect_stats();
    v.stats.outer_iterations = levels;
    v.back_level_edges = back_edge_count;
    v.nested_searches = searches;
    if (eng_.model_error()) return v;
    if (lasso) {
      v.kind = VerdictKind::Counterexample;
      v.lasso = std::move(*lasso);
    }
    return v;
  }

 private:
  static constexpr std::uint64_t kEdge = 0, kSeed = 1;

  struct Rec {
    std::uint32_t level = 0;
    StateDescriptor parent;
    bool expanded = false;
    std::vector<StateDescriptor> succs;
  };

  void expand_frontier(Worker& w) {
    auto& list = frontier_[w.id()];
    std::vector<std::uint32_t> todo;
    todo.swap(list);
    for (std::uint32_t idx : todo) {
      Rec& r = recs_[w.id()][idx];
      if (!r.expanded) {
        Expansion e = w.expand(w.state_at(idx));
        r.succs = std::move(e.states);
        r.expanded = true;
      }
      for (const StateDescriptor& s : r.succs)
        w.send(s, r.level, kEdge, w.state_at(idx));
    }
  }

  void on_visit(Worker& w, Message&& m) {
    auto [idx, fresh] = w.intern(m.state);
    auto& rs = recs_[w.id()];
    if (rs.size() < w.size()) rs.resize(w.size());
    Rec& r = rs[idx];
    if (m.b == kSeed) {
      r.level = 0;
      frontier_[w.id()].push_back(idx);
      return;
    }
    std::uint32_t sender_level = static_cast<std::uint32_t>(m.a);
    if (fresh) {
      r.level = sender_level + 1;
      r.parent = std::move(m.aux);
      frontier_[w.id()].push_back(idx);
      return;
    }
    if (r.level <= sender_level)
      back_edges_[w.id()].emplace_back(std::move(m.aux), std::move(m.state));
  }

  /// Two-flag reachability from v: search (state, accepting-seen) pairs,
  /// succeed on reaching u with the flag set. The flag starts as
  /// accepting(u) || accepting(v). Returns the path v..u on success.
  std::optional<std::vector<StateDescriptor>> nested_search(
      const StateDescriptor& u, const StateDescriptor& v) {
    const int k = eng_.worker_count();
    side_.clear();
    side_.resize(static_cast<std::size_t>(k));
    found_ = std::nullopt;

    bool flag0 = eng_.source().is_accepting(u) || eng_.source().is_accepting(v);
    Phase search;
    search.begin = [&v, flag0](Worker& w) {
      if (w.owns(v)) w.send(v, flag0 ? 1 : 0, 2 /* no parent flag */);
    };
    search.handle = [this, &u](Worker& w, Message&& m) {
      nested_visit(w, u, std::move(m));
    };
    eng_.run_phase(search);

    if (!found_) return std::nullopt;
    // Rebuild v -> ... -> u from the (state, flag) parent chain.
    std::vector<StateDescriptor> path;
    StateDescriptor cur = u;
    std::uint8_t flag = 1;
    for (;;) {
      path.push_back(cur);
      int owner = eng_.partition().owner(cur);
      auto it = side_[owner].find(cur);
      const NestedRec& r = it->second;
      std::uint8_t slot = flag;
      if (r.parent_kind[slot] == 2) break;  // the seed
      StateDescriptor next = r.parent[slot];
      flag = r.parent_kind[slot];
      cur = std::move(next);
    }
    std::reverse(path.begin(), path.end());
    return path;
  }

  struct NestedRec {
    std::uint8_t seen = 0;            // bit per flag value
    StateDescriptor parent[2];        // per flag value
    std::uint8_t parent_kind[2] = {0, 0};  // parent's flag, or 2 for the seed
  };

  void nested_visit(Worker& w, const StateDescriptor& u, Message&& m) {
    auto& side = side_[w.id()];
    std::uint8_t flag = static_cast<std::uint8_t>(m.a & 1);
    NestedRec& r = side[m.state];
    std::uint8_t bit = static_cast<std::uint8_t>(1u << flag);
    if (r.seen & bit) return;
    r.seen |= bit;
    if (m.b == 2) {
      r.parent_kind[flag] = 2;
    } else {
      r.parent[flag] = std::move(m.aux);
      r.parent_kind[flag] = static_cast<std::uint8_t>(m.b & 1);
    }
    if (flag == 1 && m.state == u) {
      std::lock_guard<std::mutex> lock(found_mutex_);
      if (!found_) found_ = m.state;
      w.request_stop();
      return;
    }
    Expansion e = w.expand(m.state);
    for (StateDescriptor& s : e.states) {
      std::uint8_t nf = (flag != 0 || eng_.source().is_accepting(s)) ? 1 : 0;
      w.send(std::move(s), nf, flag, m.state);
    }
  }

  Lasso assemble(const StateDescriptor& u, const std::vector<StateDescriptor>& vu_path) {
    Lasso l;
    l.cycle.push_back(u);
    for (std::size_t i = 0; i + 1 < vu_path.size(); ++i) l.cycle.push_back(vu_path[i]);
    // prefix: main BFS tree parents from u back to the initial state
    StateDescriptor init = eng_.source().initial();
    if (u != init) {
      std::vector<StateDescriptor> rev;
      StateDescriptor cur = u;
      for (;;) {
        int owner = eng_.partition().owner(cur);
        auto idx = eng_.worker(owner).lookup(cur);
        const Rec& r = recs_[owner][*idx];
        if (r.parent.empty()) break;
        rev.push_back(r.parent);
        cur = r.parent;
      }
      l.prefix.assign(rev.rbegin(), rev.rend());
    }
    return l;
  }

  Engine& eng_;
  std::vector<std::vector<Rec>> recs_;
  std::vector<std::vector<std::uint32_t>> frontier_;
  std::vector<std::vector<std::pair<StateDescriptor, StateDescriptor>>> back_edges_;
  std::vector<std::unordered_map<StateDescriptor, NestedRec, DescriptorHash>> side_;
  std::mutex found_mutex_;
  std::optional<StateDescriptor> found_;
};

}  // namespace parcheck
