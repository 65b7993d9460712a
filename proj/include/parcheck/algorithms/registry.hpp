#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "parcheck/algorithms/bledge.hpp"
#include "parcheck/algorithms/map.hpp"
#include "parcheck/algorithms/map_owcty.hpp"
#include "parcheck/algorithms/ndfs.hpp"
#include "parcheck/algorithms/negc.hpp"
#include "parcheck/algorithms/owcty.hpp"
#include "parcheck/algorithms/reachability.hpp"
#include "parcheck/lasso.hpp"

namespace parcheck {

enum class AlgorithmId { Reach, Ndfs, Owcty, Map, MapOwcty, Negc, Bledge };

inline std::optional<AlgorithmId> parse_algorithm(const std::string& name) {
  if (name == "reach") return AlgorithmId::Reach;
  if (name == "ndfs") return AlgorithmId::Ndfs;
  if (name == "owcty") return AlgorithmId::Owcty;
  if (name == "map") return AlgorithmId::Map;
  if (name == "map-owcty") return AlgorithmId::MapOwcty;
  if (name == "negc") return AlgorithmId::Negc;
  if (name == "bledge") return AlgorithmId::Bledge;
  return std::nullopt;
}

inline const char* algorithm_name(AlgorithmId id) {
  switch (id) {
    case AlgorithmId::Reach: return "reach";
    case AlgorithmId::Ndfs: return "ndfs";
    case AlgorithmId::Owcty: return "owcty";
    case AlgorithmId::Map: return "map";
    case AlgorithmId::MapOwcty: return "map-owcty";
    case AlgorithmId::Negc: return "negc";
    case AlgorithmId::Bledge: return "bledge";
  }
  return "?";
}

struct RunOptions {
  // reach only: verdict carries a trace to the first state satisfying this
  std::function<bool(const StateDescriptor&)> error_predicate;
  // owcty / map-owcty: arms the weak-input two-iteration diagnostic
  bool weak_property = false;
};

/// Runs one verification procedure on a graph source and returns a verdict
/// with full statistics. Counterexample lassos are re-validated against the
/// source before being returned; an invalid witness is a hard fault. A model
/// error reported by any worker overrides the verdict and carries the
/// shortest trace to the state whose expansion failed.
inline Verdict run_algorithm(AlgorithmId id, const GraphSource& source,
                             const EngineConfig& cfg, const RunOptions& opts = {}) {
  auto t0 = std::chrono::steady_clock::now();

  Verdict v;
  // No accepting state can exist: no accepting cycle can exist either, and
  // the cycle detectors answer without exploration.
  if (id != AlgorithmId::Reach && !source.accepting_possible()) {
    v.kind = VerdictKind::Holds;
    return v;
  }

  if (id == AlgorithmId::Ndfs && cfg.workers != 1)
    throw ConfigError("ndfs requires exactly one worker");

  Engine eng(source, cfg);
  std::vector<WorkerGraph> graphs(static_cast<std::size_t>(cfg.workers));
  std::optional<StateDescriptor> predicate_hit;

  switch (id) {
    case AlgorithmId::Reach:
      v = run_reachability_impl(eng, opts.error_predicate, predicate_hit);
      break;
    case AlgorithmId::Ndfs: {
      NdfsRunner r(eng);
      v = r.run();
      break;
    }
    case AlgorithmId::Owcty: {
      OwctyRunner r(eng, graphs.data(), opts.weak_property);
      v = r.run(/*pre_generated=*/false);
      break;
    }
    case AlgorithmId::Map: {
      MapRunner r(eng, graphs.data());
      std::uint64_t iterations = 0;
      auto res = r.run(/*max_iterations=*/0, &iterations);
      v = *res;  // unbounded run always decides
      break;
    }
    case AlgorithmId::MapOwcty:
      v = run_map_owcty(eng, graphs, opts.weak_property);
      break;
    case AlgorithmId::Negc: {
      NegcRunner r(eng);
      v = r.run();
      break;
    }
    case AlgorithmId::Bledge: {
      BledgeRunner r(eng);
      v = r.run();
      break;
    }
  }

  if (auto err = eng.model_error()) {
    v.kind = VerdictKind::ModelError;
    v.message = err->message;
    v.lasso = Lasso{};
    auto trace = bfs_path(source, source.initial(), [&](const StateDescriptor& d) {
      return d == err->state;
    });
    if (trace) v.trace = std::move(*trace);
    v.stats = eng.collect_stats();
  } else if (predicate_hit) {
    v.kind = VerdictKind::ModelError;
    v.message = "error predicate satisfied";
    auto trace = bfs_path(source, source.initial(), [&](const StateDescriptor& d) {
      return d == *predicate_hit;
    });
    if (trace) v.trace = std::move(*trace);
  }

  if (v.kind == VerdictKind::Counterexample) {
    normalize_lasso(v.lasso);
    auto violation = validate_lasso(v.lasso, source);
    if (violation)
      throw std::logic_error(std::string("extracted lasso failed validation (") +
                             *violation + "); the detector lied");
  }

  auto t1 = std::chrono::steady_clock::now();
  v.stats.wall_time_ms = static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count());
  return v;
}

}  // namespace parcheck
