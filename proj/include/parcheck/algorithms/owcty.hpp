#pragma once

#include <stdexcept>

#include "parcheck/algorithms/common.hpp"

namespace parcheck {

/// One-Way-Catch-Them-Young: explicit SCC-hull detection. Deliberately not
/// on-the-fly: phase 0 generates the whole reachable graph, then the
/// candidate set S is shrunk by alternating Reach (keep states reachable from
/// accepting members of S, inside S) and Elim (peel states with no
/// predecessor inside S) until it stops changing. A non-empty fixpoint
/// contains an accepting cycle.
class OwctyRunner {
 public:
  OwctyRunner(Engine& eng, WorkerGraph* graphs, bool weak_hint)
      : eng_(eng), graphs_(graphs), weak_(weak_hint) {}

  /// `pre_generated`: the engine tables and WorkerGraphs already hold the
  /// full reachable graph (a prior pass built them), skip generation.
  Verdict run(bool pre_generated) {
    const int k = eng_.worker_count();
    epoch_.resize(static_cast<std::size_t>(k));
    pred_.resize(static_cast<std::size_t>(k));

    if (!pre_generated) generate();
    Verdict v;
    if (eng_.stopped()) {  // model error during generation
      v.stats = eng_.collect_stats();
      return v;
    }
    for (int i = 0; i < k; ++i) {
      std::size_t n = eng_.worker(i).size();
      graphs_[i].grow(n);
      epoch_[i].assign(n, 0);
      pred_[i].assign(n, 0);
    }

    std::uint64_t size_before = total_interned(eng_);
    std::uint64_t iterations = 0;
    std::uint32_t epoch = 0;
    for (;;) {
      ++epoch;
      ++iterations;
      reach_phase(epoch);
      elim_phase(epoch);
      std::uint64_t size_after = s_size(epoch);
      if (size_after == 0 || size_after == size_before) {
        size_before = size_after;
        break;
      }
      size_before = size_after;
    }

    if (weak_ && iterations > 2)
      throw std::logic_error(
          "owcty: weak-classified input needed " + std::to_string(iterations) +
          " iterations; the 2-iteration bound is violated");

    v.stats = eng_.collect_stats();
    v.stats.outer_iterations = iterations;
    if (size_before > 0) {
      std::vector<StateDescriptor> hull;
      for (int i = 0; i < k; ++i) {
        Worker& w = eng_.worker(i);
        for (std::uint32_t idx = 0; idx < w.size(); ++idx)
          if (epoch_[i][idx] == epoch) hull.push_back(w.state_at(idx));
      }
      auto lasso = find_accepting_lasso(eng_.source(), hull);
      if (!lasso)
        throw std::logic_error("owcty: non-empty fixpoint without an extractable "
                               "accepting cycle");
      v.kind = VerdictKind::Counterexample;
      v.lasso = std::move(*lasso);
    }
    return v;
  }

 private:
  static constexpr std::uint32_t kDead = 0xffffffffu;
  // message tags (Message::a)
  static constexpr std::uint64_t kEdge = 0, kSeed = 1, kRemove = 2, kDecrement = 3;

  void generate() {
    Phase gen;
    gen.begin = [this](Worker& w) {
      StateDescriptor init = eng_.source().initial();
      if (w.owns(init)) w.send(std::move(init));
    };
    gen.handle = [this](Worker& w, Message&& m) {
      auto [idx, fresh] = w.intern(m.state);
      if (!fresh) return;
      WorkerGraph& g = graphs_[w.id()];
      g.grow(w.size());
      g.accepting[idx] = eng_.source().is_accepting(m.state);
      Expansion e = w.expand(m.state);
      g.succs[idx] = std::move(e.states);
      for (const StateDescriptor& succ : g.succs[idx]) w.send(succ);
    };
    eng_.run_phase(gen);
  }

  // S_e := states reachable inside S_{e-1} from accepting members of S_{e-1},
  // counting each state's in-degree within S_e along the way.
  void reach_phase(std::uint32_t epoch) {
    Phase reach;
    reach.begin = [this, epoch](Worker& w) {
      WorkerGraph& g = graphs_[w.id()];
      for (std::uint32_t idx = 0; idx < w.size(); ++idx)
        if (g.accepting[idx] && epoch_[w.id()][idx] == epoch - 1)
          w.send(w.state_at(idx), kSeed);
    };
    reach.handle = [this, epoch](Worker& w, Message&& m) {
      std::uint32_t idx = *w.lookup(m.state);
      std::uint32_t& e = epoch_[w.id()][idx];
      std::uint32_t& p = pred_[w.id()][idx];
      if (m.a == kSeed) {
        if (e != epoch - 1) return;  // already reached, or dead
        e = epoch;
        p = 0;
        expand_in_s(w, idx);
      } else {
        if (e == epoch) {
          ++p;
        } else if (e == epoch - 1) {
          e = epoch;
          p = 1;
          expand_in_s(w, idx);
        }
        // anything else: target fell out of S earlier, drop
      }
    };
    eng_.run_phase(reach);
  }

  void expand_in_s(Worker& w, std::uint32_t idx) {
    const auto& succs = graphs_[w.id()].succs[idx];
    w.note_edges(succs.size());
    for (const StateDescriptor& s : succs) w.send(s, kEdge);
  }

  // Repeatedly delete states whose in-degree within S dropped to zero.
  void elim_phase(std::uint32_t epoch) {
    Phase elim;
    elim.begin = [this, epoch](Worker& w) {
      for (std::uint32_t idx = 0; idx < w.size(); ++idx)
        if (epoch_[w.id()][idx] == epoch && pred_[w.id()][idx] == 0)
          w.send(w.state_at(idx), kRemove);
    };
    elim.handle = [this, epoch](Worker& w, Message&& m) {
      std::uint32_t idx = *w.lookup(m.state);
      std::uint32_t& e = epoch_[w.id()][idx];
      if (e != epoch) return;  // already removed
      if (m.a == kRemove) {
        remove(w, idx, epoch);
      } else {  // kDecrement
        std::uint32_t& p = pred_[w.id()][idx];
        if (p > 0 && --p == 0) remove(w, idx, epoch);
      }
    };
    eng_.run_phase(elim);
  }

  void remove(Worker& w, std::uint32_t idx, std::uint32_t epoch) {
    epoch_[w.id()][idx] = kDead;
    const auto& succs = graphs_[w.id()].succs[idx];
    w.note_edges(succs.size());
    for (const StateDescriptor& s : succs) w.send(s, kDecrement);
    (void)epoch;
  }

  std::uint64_t s_size(std::uint32_t epoch) {
    std::uint64_t n = 0;
    for (int i = 0; i < eng_.worker_count(); ++i)
      for (std::uint32_t e : epoch_[i])
        if (e == epoch) ++n;
    return n;
  }

  Engine& eng_;
  WorkerGraph* graphs_;  // one per worker
  bool weak_;
  std::vector<std::vector<std::uint32_t>> epoch_;
  std::vector<std::vector<std::uint32_t>> pred_;
};

}  // namespace parcheck
