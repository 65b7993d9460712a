#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "parcheck/descriptor.hpp"

namespace parcheck {

/// Result of enumerating the immediate successors of one state. `error` is
/// non-empty when the expansion itself is ill-defined (a model effect drove a
/// variable out of its domain); the engine surfaces that as a MODEL_ERROR
/// verdict with a trace to the offending state.
struct Expansion {
  std::vector<StateDescriptor> states;
  std::string error;

  bool ok() const { return error.empty(); }
};

/// Abstract graph shared by explicit graphs and the interpreter-backed
/// product: initial state, ordered successor enumeration, acceptance test.
///
/// Implementations must be pure functions of the descriptor and safe for
/// concurrent calls from all workers.
class GraphSource {
 public:
  virtual ~GraphSource() = default;

  virtual std::size_t descriptor_len() const = 0;
  virtual StateDescriptor initial() const = 0;
  virtual Expansion successors(const StateDescriptor& s) const = 0;
  virtual bool is_accepting(const StateDescriptor& s) const = 0;

  /// False when the source can statically rule out accepting states
  /// altogether, which lets cycle detectors answer HOLDS without exploring.
  virtual bool accepting_possible() const { return true; }
};

}  // namespace parcheck
