#pragma once

#include <optional>

#include "parcheck/algorithms/common.hpp"

namespace parcheck {

/// Classic two-color nested depth-first search, single worker only: the
/// depth-first stack cannot be maintained efficiently across partitions.
/// Iterative with explicit stacks, so deep graphs cannot overflow the call
/// stack. On-the-fly: stops at the first accepting cycle; every state is
/// entered at most once per color, giving at most 2M edge traversals.
class NdfsRunner {
 public:
  explicit NdfsRunner(Engine& eng) : eng_(eng) {}

  Verdict run() {
    if (eng_.worker_count() != 1)
      throw ConfigError("ndfs requires exactly one worker");

    Phase phase;
    phase.begin = [this](Worker& w) { blue_dfs(w); };
    eng_.run_phase(phase);

    Verdict v;
    v.stats = eng_.collect_stats();
    if (lasso_) {
      v.kind = VerdictKind::Counterexample;
      v.lasso = std::move(*lasso_);
    }
    return v;
  }

 private:
  static constexpr std::uint8_t kWhite = 0, kCyan = 1, kBlue = 2;

  struct Frame {
    std::uint32_t idx;
    std::vector<StateDescriptor> succs;
    std::size_t next = 0;
  };

  void blue_dfs(Worker& w) {
    StateDescriptor init = eng_.source().initial();
    push_blue(w, init);
    while (!blue_stack_.empty() && !eng_.stopped()) {
      Frame& f = blue_stack_.back();
      if (f.next < f.succs.size()) {
        const StateDescriptor& t = f.succs[f.next++];
        auto [ti, fresh] = w.intern(t);
        grow(w);
        if (fresh || color_[ti] == kWhite) push_blue(w, t);
      } else {
        std::uint32_t idx = f.idx;
        if (eng_.source().is_accepting(w.state_at(idx))) {
          red_dfs(w, idx);
          if (lasso_) return;
        }
        color_[idx] = kBlue;
        blue_stack_.pop_back();
      }
    }
  }

  void red_dfs(Worker& w, std::uint32_t seed) {
    std::vector<Frame> red_stack;
    red_[seed] = true;
    red_stack.push_back(make_frame(w, seed));
    while (!red_stack.empty() && !eng_.stopped()) {
      Frame& f = red_stack.back();
      if (f.next >= f.succs.size()) {
        red_stack.pop_back();
        continue;
      }
      const StateDescriptor& t = f.succs[f.next++];
      auto [ti, fresh] = w.intern(t);
      grow(w);
      if (!fresh && color_[ti] == kCyan) {
        build_lasso(w, red_stack, ti);
        return;
      }
      if (!red_[ti]) {
        red_[ti] = true;
        red_stack.push_back(make_frame(w, ti));
      }
    }
  }

  // Cycle: blue path from t up to the seed, then the red path back to the
  // edge that closed at t. The prefix is the blue path below t.
  void build_lasso(Worker& w, const std::vector<Frame>& red_stack, std::uint32_t t) {
    Lasso l;
    std::uint32_t cut = blue_pos_[t];
    for (std::uint32_t i = 0; i < cut; ++i)
      l.prefix.push_back(w.state_at(blue_stack_[i].idx));
    for (std::uint32_t i = cut; i < blue_stack_.size(); ++i)
      l.cycle.push_back(w.state_at(blue_stack_[i].idx));
    for (std::size_t i = 1; i < red_stack.size(); ++i)
      l.cycle.push_back(w.state_at(red_stack[i].idx));
    lasso_ = std::move(l);
  }

  Frame make_frame(Worker& w, std::uint32_t idx) {
    Frame f;
    f.idx = idx;
    Expansion e = w.expand(w.state_at(idx));
    f.succs = std::move(e.states);
    return f;
  }

  void push_blue(Worker& w, const StateDescriptor& d) {
    auto [idx, fresh] = w.intern(d);
    (void)fresh;
    grow(w);
    color_[idx] = kCyan;
    blue_pos_[idx] = static_cast<std::uint32_t>(blue_stack_.size());
    blue_stack_.push_back(make_frame(w, idx));
  }

  void grow(Worker& w) {
    if (color_.size() < w.size()) {
      color_.resize(w.size(), kWhite);
      red_.resize(w.size(), false);
      blue_pos_.resize(w.size(), 0);
    }
  }

  Engine& eng_;
  std::vector<Frame> blue_stack_;
  std::vector<std::uint8_t> color_;
  std::vector<bool> red_;
  std::vector<std::uint32_t> blue_pos_;
  std::optional<Lasso> lasso_;
};

}  // namespace parcheck
