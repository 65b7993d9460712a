#pragma once

#include <sstream>
#include <string>

#include "parcheck/graph_source.hpp"
#include "parcheck/model.hpp"

namespace parcheck {

/// Interpreter-backed system graph with asynchronous interleaving semantics:
/// one enabled transition of one process fires per step, ordered by (process
/// declaration order, transition declaration order). Duplicate successors are
/// not removed here; deduplication is the engine's job.
///
/// All right-hand sides of one transition's effects are evaluated on the
/// source state, then stored (simultaneous assignment). A stored value
/// outside its domain is reported as an expansion error, not a disabled
/// transition.
class ModelSource final : public GraphSource {
 public:
  explicit ModelSource(const Model& m) : m_(&m) {}

  std::size_t descriptor_len() const override { return m_->layout.descriptor_len; }

  StateDescriptor initial() const override { return initial_state(*m_); }

  Expansion successors(const StateDescriptor& s) const override {
    Expansion out;
    const VarLayout& layout = m_->layout;
    for (std::uint32_t pi = 0; pi < m_->processes.size(); ++pi) {
      const Process& p = m_->processes[pi];
      std::uint32_t loc = m_->location_of(s, pi);
      for (const Transition& t : p.transitions) {
        if (t.from != loc) continue;
        if (eval_expr(t.guard, s, layout) == 0) continue;
        StateDescriptor succ = s;
        std::vector<std::int64_t> values(t.effects.size());
        for (std::size_t i = 0; i < t.effects.size(); ++i)
          values[i] = eval_expr(t.effects[i].rhs, s, layout);
        bool in_domain = true;
        for (std::size_t i = 0; i < t.effects.size() && in_domain; ++i) {
          const VarDecl& v = layout.vars[t.effects[i].var];
          if (values[i] < v.lo || values[i] > v.hi) {
            in_domain = false;
            if (out.error.empty()) {
              std::ostringstream msg;
              msg << "process " << p.name << ", transition " << p.locations[t.from]
                  << " -> " << p.locations[t.to] << ": " << v.name << " := "
                  << expr_to_string(t.effects[i].rhs) << " evaluates to "
                  << values[i] << ", outside " << v.lo << ".." << v.hi;
              out.error = msg.str();
            }
          }
        }
        // The violating transition yields no successor, but the remaining
        // transitions are still enumerated so error traces can be rebuilt.
        if (!in_domain) continue;
        for (std::size_t i = 0; i < t.effects.size(); ++i)
          layout.write(succ, t.effects[i].var, values[i]);
        succ[layout.process_offset + pi] = static_cast<std::uint8_t>(t.to);
        out.states.push_back(std::move(succ));
      }
    }
    return out;
  }

  // A bare system graph carries no acceptance; acceptance comes from the
  // property automaton via the product.
  bool is_accepting(const StateDescriptor&) const override { return false; }
  bool accepting_possible() const override { return false; }

  const Model& model() const { return *m_; }

 private:
  const Model* m_;
};

}  // namespace parcheck
