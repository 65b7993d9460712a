#pragma once

#include <stdexcept>
#include <string>

#include "parcheck/graph_source.hpp"
#include "parcheck/model.hpp"
#include "parcheck/property.hpp"

namespace parcheck {

class CompositionError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Synchronous product of a system graph and a property automaton. States are
/// (system state, q); the descriptor is the system descriptor followed by q
/// as 4 little-endian bytes. A product step (s,q) -> (s',q') exists iff
/// s -> s' in the system and some transition (q, guard, q') has its guard
/// true in s. Guards observe the SOURCE system state of the step, i.e. the
/// monitor synchronizes with the transition it is watching. Acceptance is
/// q in q_accepting.
class ProductSource final : public GraphSource {
 public:
  ProductSource(const GraphSource& sys, const PropertyAutomaton& prop,
                const VarLayout& layout)
      : sys_(&sys), prop_(&prop), layout_(&layout) {
    for (const PropertyTransition& t : prop.transitions) {
      std::vector<std::uint32_t> used;
      expr_vars(t.guard, used);
      for (std::uint32_t v : used)
        if (v >= layout.vars.size())
          throw CompositionError("property guard references undeclared variable");
      // Indices come from the model's own parser; a mismatched layout is the
      // caller handing us the wrong model.
      for (std::uint32_t v : used)
        if (layout.vars[v].offset + layout.vars[v].width >
            static_cast<std::uint32_t>(sys.descriptor_len()))
          throw CompositionError("property guard variable '" +
                                 layout.vars[v].name +
                                 "' lies outside the system descriptor");
    }
  }

  std::size_t descriptor_len() const override { return sys_->descriptor_len() + 4; }

  StateDescriptor initial() const override {
    StateDescriptor d = sys_->initial();
    append_u32_le(d, prop_->q_init);
    return d;
  }

  Expansion successors(const StateDescriptor& s) const override {
    const std::size_t sys_len = sys_->descriptor_len();
    StateDescriptor sys_state(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(sys_len));
    std::uint32_t q = read_u32_le(s, sys_len);

    Expansion sys_exp = sys_->successors(sys_state);
    Expansion out;
    if (!sys_exp.ok()) {
      out.error = std::move(sys_exp.error);
      return out;
    }

    // Guards depend only on the source system state: evaluate the enabled
    // property moves once, then pair them with every system successor.
    std::vector<std::uint32_t> enabled;
    for (const PropertyTransition& t : prop_->transitions)
      if (t.from == q && eval_expr(t.guard, sys_state, *layout_) != 0)
        enabled.push_back(t.to);

    out.states.reserve(sys_exp.states.size() * enabled.size());
    for (const StateDescriptor& succ : sys_exp.states)
      for (std::uint32_t q2 : enabled) {
        StateDescriptor d = succ;
        append_u32_le(d, q2);
        out.states.push_back(std::move(d));
      }
    return out;
  }

  bool is_accepting(const StateDescriptor& s) const override {
    return prop_->q_accepting[read_u32_le(s, sys_->descriptor_len())];
  }

  bool accepting_possible() const override { return prop_->any_accepting(); }

 private:
  const GraphSource* sys_;
  const PropertyAutomaton* prop_;
  const VarLayout* layout_;
};

}  // namespace parcheck
