#pragma once

#include <cstdint>
#include <stdexcept>

#include "parcheck/explicit_graph.hpp"

namespace parcheck {

/// xorshift64* generator (Vigna). Shift triple (12, 25, 27), output
/// multiplier 0x2545F4914F6CDD1D. Chosen because it is trivial to reproduce
/// bit-exactly in any language.
class Xorshift64Star {
 public:
  explicit Xorshift64Star(std::uint64_t seed)
      : state_(seed != 0 ? seed : 0x9E3779B97F4A7C15ULL) {}

  std::uint64_t next() {
    std::uint64_t x = state_;
    x ^= x >> 12;
    x ^= x << 25;
    x ^= x >> 27;
    state_ = x;
    return x * 0x2545F4914F6CDD1DULL;
  }

  /// Uniform value in [0, bound).
  std::uint64_t next_below(std::uint64_t bound) { return next() % bound; }

 private:
  std::uint64_t state_;
};

/// Deterministic random graph: m = round(n * avg_deg) edges drawn uniformly
/// (duplicates and self-loops allowed), then one draw per state against
/// p_acc for acceptance. init is state 0. Reachability of every state is not
/// guaranteed. Identical inputs give an identical graph on every platform.
inline ExplicitGraph generate_random_graph(std::uint32_t n, double avg_deg,
                                           double p_acc, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("generate_random_graph: n must be >= 1");
  if (avg_deg < 0) throw std::invalid_argument("generate_random_graph: avg_deg must be >= 0");
  if (p_acc < 0 || p_acc > 1)
    throw std::invalid_argument("generate_random_graph: p_acc must be in [0,1]");

  ExplicitGraph g;
  g.n = n;
  g.init = 0;
  g.accepting.assign(n, false);
  g.adjacency.resize(n);

  Xorshift64Star rng(seed);
  const std::uint64_t m = static_cast<std::uint64_t>(avg_deg * n + 0.5);
  for (std::uint64_t i = 0; i < m; ++i) {
    std::uint32_t u = static_cast<std::uint32_t>(rng.next_below(n));
    std::uint32_t v = static_cast<std::uint32_t>(rng.next_below(n));
    g.add_edge(u, v);
  }
  const std::uint64_t threshold =
      static_cast<std::uint64_t>(p_acc * 18446744073709551616.0);  // p_acc * 2^64
  for (std::uint32_t s = 0; s < n; ++s) {
    std::uint64_t r = rng.next();
    if (p_acc >= 1.0 || r < threshold) g.accepting[s] = true;
  }
  return g;
}

}  // namespace parcheck
