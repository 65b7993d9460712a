#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "parcheck/descriptor.hpp"

namespace parcheck {

/// Counterexample witness: a finite prefix from the initial state followed by
/// a cycle through at least one accepting state. The prefix runs up to the
/// cycle entry (exclusive); cycle.front() is the entry. An empty prefix means
/// the initial state itself lies on the cycle.
struct Lasso {
  std::vector<StateDescriptor> prefix;
  std::vector<StateDescriptor> cycle;
};

struct FlushCounters {
  std::uint64_t explicit_ = 0;
  std::uint64_t full = 0;
  std::uint64_t idle = 0;
  std::uint64_t aged = 0;  // structurally zero: there is no age-based flush
};

struct Stats {
  std::uint64_t states_visited = 0;
  std::uint64_t edges_traversed = 0;
  std::uint64_t cross_edges = 0;
  std::uint64_t messages_sent = 0;
  FlushCounters flushes;
  std::uint64_t outer_iterations = 0;
  std::uint64_t wall_time_ms = 0;
};

enum class VerdictKind { Holds, Counterexample, ModelError };

inline const char* verdict_name(VerdictKind k) {
  switch (k) {
    case VerdictKind::Holds: return "HOLDS";
    case VerdictKind::Counterexample: return "COUNTEREXAMPLE";
    case VerdictKind::ModelError: return "MODEL_ERROR";
  }
  return "?";
}

struct Verdict {
  VerdictKind kind = VerdictKind::Holds;
  Lasso lasso;                         // meaningful iff kind == Counterexample
  std::vector<StateDescriptor> trace;  // meaningful iff kind == ModelError
  std::string message;                 // model error / predicate description
  Stats stats;

  // Per-algorithm diagnostics, not part of the stable stats schema.
  std::uint64_t back_level_edges = 0;
  std::uint64_t nested_searches = 0;

  bool holds() const { return kind == VerdictKind::Holds; }
  bool counterexample() const { return kind == VerdictKind::Counterexample; }
};

/// Stats as a single JSON object with stable key names. Key order is
/// alphabetical (nlohmann objects are sorted), so two equal runs serialize to
/// identical bytes.
inline nlohmann::json stats_json(const Stats& s, VerdictKind kind,
                                 bool include_wall_time = true) {
  nlohmann::json j{
      {"states_visited", s.states_visited},
      {"edges_traversed", s.edges_traversed},
      {"cross_edges", s.cross_edges},
      {"messages_sent", s.messages_sent},
      {"flushes_explicit", s.flushes.explicit_},
      {"flushes_full", s.flushes.full},
      {"flushes_idle", s.flushes.idle},
      {"flushes_aged", s.flushes.aged},
      {"outer_iterations", s.outer_iterations},
      {"verdict", verdict_name(kind)},
  };
  if (include_wall_time) j["wall_time_ms"] = s.wall_time_ms;
  return j;
}

}  // namespace parcheck
