#pragma once

#include <cstdint>
#include <vector>

#include "parcheck/expr.hpp"
#include "parcheck/scc.hpp"

namespace parcheck {

struct PropertyTransition {
  std::uint32_t from = 0;
  std::uint32_t to = 0;
  Expr guard;
};

/// Buchi automaton over guard expressions. Guards may reference only
/// variables declared by the paired model; that is checked when the automaton
/// and a model are composed.
struct PropertyAutomaton {
  std::uint32_t q_count = 0;
  std::uint32_t q_init = 0;
  std::vector<bool> q_accepting;
  std::vector<PropertyTransition> transitions;

  bool any_accepting() const {
    for (bool a : q_accepting)
      if (a) return true;
    return false;
  }

  /// The one-state monitor that accepts everything: product with it is
  /// isomorphic to the system with all states accepting.
  static PropertyAutomaton universal() {
    PropertyAutomaton p;
    p.q_count = 1;
    p.q_init = 0;
    p.q_accepting = {true};
    Expr t = Expr::binary(ExprOp::Eq, Expr::lit(0), Expr::lit(0));
    p.transitions.push_back({0, 0, t});
    return p;
  }
};

enum class WeaknessClass { Weak, General };

/// Weak iff every SCC of the transition graph (guards ignored) is
/// acceptance-homogeneous. Weak inputs admit the linear-time OWCTY bound.
inline WeaknessClass classify_weak(const PropertyAutomaton& p) {
  std::vector<std::vector<std::uint32_t>> adj(p.q_count);
  for (const auto& t : p.transitions) adj[t.from].push_back(t.to);
  SccResult sccs = compute_sccs(adj);

  // 0 = unseen, 1 = only non-accepting, 2 = only accepting, 3 = mixed
  std::vector<std::uint8_t> seen(sccs.count, 0);
  for (std::uint32_t q = 0; q < p.q_count; ++q) {
    std::uint8_t bit = p.q_accepting[q] ? 2 : 1;
    seen[sccs.component[q]] |= bit;
    if (seen[sccs.component[q]] == 3) return WeaknessClass::General;
  }
  return WeaknessClass::Weak;
}

}  // namespace parcheck
