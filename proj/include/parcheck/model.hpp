#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "parcheck/descriptor.hpp"
#include "parcheck/expr.hpp"
#include "parcheck/property.hpp"

namespace parcheck {

struct VarDecl {
  std::string name;
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  std::int64_t init = 0;
  // descriptor placement, filled by finalize_layout()
  std::uint32_t offset = 0;
  std::uint8_t width = 1;
};

/// Descriptor layout: variables first, in declaration order, each stored as
/// (value - lo) in unsigned little-endian of minimal width (1, 2 or 4 bytes)
/// covering the domain; then one byte per process holding its location index.
struct VarLayout {
  std::vector<VarDecl> vars;
  std::uint32_t process_offset = 0;  // first location byte
  std::uint32_t descriptor_len = 0;

  std::int64_t read(const StateDescriptor& s, std::uint32_t i) const {
    const VarDecl& v = vars[i];
    std::uint64_t raw = 0;
    for (int b = v.width - 1; b >= 0; --b)
      raw = (raw << 8) | s[v.offset + static_cast<std::uint32_t>(b)];
    return v.lo + static_cast<std::int64_t>(raw);
  }

  void write(StateDescriptor& s, std::uint32_t i, std::int64_t value) const {
    const VarDecl& v = vars[i];
    std::uint64_t raw = static_cast<std::uint64_t>(value - v.lo);
    for (std::uint8_t b = 0; b < v.width; ++b) {
      s[v.offset + b] = static_cast<std::uint8_t>(raw & 0xff);
      raw >>= 8;
    }
  }
};

struct Assignment {
  std::uint32_t var = 0;
  Expr rhs;
};

struct Transition {
  std::uint32_t from = 0;  // location index
  std::uint32_t to = 0;
  Expr guard;
  std::vector<Assignment> effects;
};

struct Process {
  std::string name;
  std::vector<std::string> locations;
  std::uint32_t init_location = 0;
  std::vector<Transition> transitions;
};

struct Model {
  VarLayout layout;
  std::vector<Process> processes;
  PropertyAutomaton property;

  std::size_t descriptor_len() const { return layout.descriptor_len; }

  std::uint32_t location_of(const StateDescriptor& s, std::uint32_t proc) const {
    return s[layout.process_offset + proc];
  }
};

inline std::uint8_t domain_width(std::int64_t lo, std::int64_t hi) {
  std::uint64_t span = static_cast<std::uint64_t>(hi - lo);
  if (span <= 0xff) return 1;
  if (span <= 0xffff) return 2;
  return 4;
}

inline void finalize_layout(Model& m) {
  std::uint32_t off = 0;
  for (VarDecl& v : m.layout.vars) {
    v.width = domain_width(v.lo, v.hi);
    v.offset = off;
    off += v.width;
  }
  m.layout.process_offset = off;
  m.layout.descriptor_len = off + static_cast<std::uint32_t>(m.processes.size());
}

inline StateDescriptor initial_state(const Model& m) {
  StateDescriptor s(m.layout.descriptor_len, 0);
  for (std::uint32_t i = 0; i < m.layout.vars.size(); ++i)
    m.layout.write(s, i, m.layout.vars[i].init);
  for (std::uint32_t p = 0; p < m.processes.size(); ++p)
    s[m.layout.process_offset + p] =
        static_cast<std::uint8_t>(m.processes[p].init_location);
  return s;
}

/// Strict evaluation over 64-bit integers; intermediate values may exceed
/// variable domains, only stored values are domain-checked. Booleans are 0/1.
inline std::int64_t eval_expr(const Expr& e, const StateDescriptor& s,
                              const VarLayout& layout) {
  auto wrap = [](std::uint64_t v) { return static_cast<std::int64_t>(v); };
  switch (e.op) {
    case ExprOp::IntLit: return e.value;
    case ExprOp::Var: return layout.read(s, e.var_index);
    case ExprOp::Add:
      return wrap(static_cast<std::uint64_t>(eval_expr(e.kids[0], s, layout)) +
                  static_cast<std::uint64_t>(eval_expr(e.kids[1], s, layout)));
    case ExprOp::Sub:
      return wrap(static_cast<std::uint64_t>(eval_expr(e.kids[0], s, layout)) -
                  static_cast<std::uint64_t>(eval_expr(e.kids[1], s, layout)));
    case ExprOp::Mul:
      return wrap(static_cast<std::uint64_t>(eval_expr(e.kids[0], s, layout)) *
                  static_cast<std::uint64_t>(eval_expr(e.kids[1], s, layout)));
    case ExprOp::Eq:
      return eval_expr(e.kids[0], s, layout) == eval_expr(e.kids[1], s, layout);
    case ExprOp::Ne:
      return eval_expr(e.kids[0], s, layout) != eval_expr(e.kids[1], s, layout);
    case ExprOp::Lt:
      return eval_expr(e.kids[0], s, layout) < eval_expr(e.kids[1], s, layout);
    case ExprOp::Le:
      return eval_expr(e.kids[0], s, layout) <= eval_expr(e.kids[1], s, layout);
    case ExprOp::Gt:
      return eval_expr(e.kids[0], s, layout) > eval_expr(e.kids[1], s, layout);
    case ExprOp::Ge:
      return eval_expr(e.kids[0], s, layout) >= eval_expr(e.kids[1], s, layout);
    case ExprOp::And:
      return eval_expr(e.kids[0], s, layout) != 0 &&
             eval_expr(e.kids[1], s, layout) != 0;
    case ExprOp::Or:
      return eval_expr(e.kids[0], s, layout) != 0 ||
             eval_expr(e.kids[1], s, layout) != 0;
    case ExprOp::Not:
      return eval_expr(e.kids[0], s, layout) == 0;
  }
  return 0;
}

inline std::string pretty_print(const Model& m) {
  std::ostringstream out;
  for (const VarDecl& v : m.layout.vars)
    out << "var " << v.name << ": " << v.lo << ".." << v.hi << " init "
        << v.init << ";\n";
  for (const Process& p : m.processes) {
    out << "process " << p.name << " {\n";
    out << "  locations";
    for (const std::string& l : p.locations) out << ' ' << l;
    out << ";\n  init " << p.locations[p.init_location] << ";\n";
    for (const Transition& t : p.transitions) {
      out << "  " << p.locations[t.from] << " -> " << p.locations[t.to] << " ["
          << expr_to_string(t.guard) << "]";
      if (!t.effects.empty()) {
        out << " /";
        for (std::size_t i = 0; i < t.effects.size(); ++i) {
          if (i) out << ',';
          out << ' ' << m.layout.vars[t.effects[i].var].name << " := "
              << expr_to_string(t.effects[i].rhs);
        }
      }
      out << ";\n";
    }
    out << "}\n";
  }
  const PropertyAutomaton& pa = m.property;
  out << "property {\n  states " << pa.q_count << ";\n  init " << pa.q_init
      << ";\n  accepting";
  for (std::uint32_t q = 0; q < pa.q_count; ++q)
    if (pa.q_accepting[q]) out << ' ' << q;
  out << ";\n";
  for (const PropertyTransition& t : pa.transitions)
    out << "  " << t.from << " -> " << t.to << " [" << expr_to_string(t.guard)
        << "];\n";
  out << "}\n";
  return out.str();
}

/// Human-readable rendering of one descriptor: variable values, process
/// locations and (for product descriptors) the trailing property state.
inline std::string render_state(const Model& m, const StateDescriptor& s) {
  std::ostringstream out;
  for (std::uint32_t i = 0; i < m.layout.vars.size(); ++i) {
    if (i) out << ' ';
    out << m.layout.vars[i].name << '=' << m.layout.read(s, i);
  }
  for (std::uint32_t p = 0; p < m.processes.size(); ++p) {
    if (p || !m.layout.vars.empty()) out << ' ';
    const Process& proc = m.processes[p];
    out << proc.name << '@' << proc.locations[m.location_of(s, p)];
  }
  if (s.size() == m.layout.descriptor_len + 4)
    out << " [q=" << read_u32_le(s, m.layout.descriptor_len) << ']';
  return out.str();
}

}  // namespace parcheck
