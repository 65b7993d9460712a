#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "parcheck/graph_source.hpp"

namespace parcheck {

class GraphParseError : public std::runtime_error {
 public:
  GraphParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Concrete adjacency-list graph with Buchi acceptance. Successor lists keep
/// input order; duplicate edges are kept (they affect m and message counts,
/// never verdicts).
struct ExplicitGraph {
  std::uint32_t n = 0;
  std::uint64_t m = 0;
  std::uint32_t init = 0;
  std::vector<bool> accepting;
  std::vector<std::vector<std::uint32_t>> adjacency;

  bool is_accepting(std::uint32_t s) const { return accepting[s]; }

  void add_edge(std::uint32_t u, std::uint32_t v) {
    adjacency[u].push_back(v);
    ++m;
  }

  std::vector<std::uint32_t> accepting_states() const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t s = 0; s < n; ++s)
      if (accepting[s]) out.push_back(s);
    return out;
  }
};

inline ExplicitGraph make_graph(std::uint32_t n, std::uint32_t init,
                                std::vector<std::uint32_t> acc,
                                std::vector<std::pair<std::uint32_t, std::uint32_t>> edges) {
  ExplicitGraph g;
  g.n = n;
  g.init = init;
  g.accepting.assign(n, false);
  for (auto a : acc) g.accepting[a] = true;
  g.adjacency.resize(n);
  for (auto [u, v] : edges) g.add_edge(u, v);
  return g;
}

// Line-oriented text format:
//   STATES <n>
//   INIT <i>
//   ACC <i1> <i2> ...        (possibly empty)
//   EDGES
//   <u> <v>                  one pair per line
// '#' starts a comment, indices are 0-based.
inline ExplicitGraph load_explicit_graph(std::string_view text) {
  ExplicitGraph g;
  enum Section { ExpectStates, ExpectInit, ExpectAcc, ExpectEdges, InEdges };
  Section section = ExpectStates;
  int lineno = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  bool have_init = false;

  auto parse_u32 = [&](const std::string& tok, const char* what) -> std::uint32_t {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(tok, &pos);
    } catch (const std::exception&) {
      throw GraphParseError(lineno, std::string("expected ") + what + ", got '" + tok + "'");
    }
    if (pos != tok.size() || v > 0xffffffffULL)
      throw GraphParseError(lineno, std::string("expected ") + what + ", got '" + tok + "'");
    return static_cast<std::uint32_t>(v);
  };

  while (std::getline(in, raw)) {
    ++lineno;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::vector<std::string> toks;
    std::string t;
    while (ls >> t) toks.push_back(t);
    if (toks.empty()) continue;

    switch (section) {
      case ExpectStates:
        if (toks[0] != "STATES" || toks.size() != 2)
          throw GraphParseError(lineno, "expected 'STATES <n>'");
        g.n = parse_u32(toks[1], "state count");
        if (g.n == 0) throw GraphParseError(lineno, "STATES must be >= 1");
        g.accepting.assign(g.n, false);
        g.adjacency.resize(g.n);
        section = ExpectInit;
        break;
      case ExpectInit:
        if (toks[0] != "INIT" || toks.size() != 2)
          throw GraphParseError(lineno, "expected 'INIT <i>'");
        g.init = parse_u32(toks[1], "state index");
        if (g.init >= g.n)
          throw GraphParseError(lineno, "INIT state " + toks[1] + " out of range");
        have_init = true;
        section = ExpectAcc;
        break;
      case ExpectAcc: {
        if (toks[0] != "ACC")
          throw GraphParseError(lineno, "expected 'ACC <i1> <i2> ...'");
        for (std::size_t i = 1; i < toks.size(); ++i) {
          std::uint32_t a = parse_u32(toks[i], "state index");
          if (a >= g.n)
            throw GraphParseError(lineno, "accepting state " + toks[i] + " out of range");
          g.accepting[a] = true;
        }
        section = ExpectEdges;
        break;
      }
      case ExpectEdges:
        if (toks[0] != "EDGES" || toks.size() != 1)
          throw GraphParseError(lineno, "expected 'EDGES'");
        section = InEdges;
        break;
      case InEdges: {
        if (toks.size() != 2)
          throw GraphParseError(lineno, "expected '<u> <v>' edge pair");
        std::uint32_t u = parse_u32(toks[0], "state index");
        std::uint32_t v = parse_u32(toks[1], "state index");
        if (u >= g.n || v >= g.n)
          throw GraphParseError(lineno, "edge " + toks[0] + " " + toks[1] +
                                            " has endpoint out of range");
        g.add_edge(u, v);
        break;
      }
    }
  }
  if (section != InEdges) {
    if (!have_init && section != ExpectStates && section != ExpectInit)
      throw GraphParseError(lineno, "missing INIT section");
    throw GraphParseError(lineno, "truncated graph file");
  }
  return g;
}

inline std::string serialize_graph(const ExplicitGraph& g) {
  std::ostringstream out;
  out << "STATES " << g.n << "\n";
  out << "INIT " << g.init << "\n";
  out << "ACC";
  for (std::uint32_t s = 0; s < g.n; ++s)
    if (g.accepting[s]) out << ' ' << s;
  out << "\nEDGES\n";
  for (std::uint32_t u = 0; u < g.n; ++u)
    for (std::uint32_t v : g.adjacency[u]) out << u << ' ' << v << "\n";
  return out.str();
}

/// GraphSource view of an ExplicitGraph. Descriptors are the 4-byte
/// little-endian state index.
class ExplicitSource final : public GraphSource {
 public:
  explicit ExplicitSource(const ExplicitGraph& g) : g_(&g) {}

  std::size_t descriptor_len() const override { return 4; }

  StateDescriptor initial() const override { return encode(g_->init); }

  Expansion successors(const StateDescriptor& s) const override {
    Expansion e;
    std::uint32_t u = decode(s);
    e.states.reserve(g_->adjacency[u].size());
    for (std::uint32_t v : g_->adjacency[u]) e.states.push_back(encode(v));
    return e;
  }

  bool is_accepting(const StateDescriptor& s) const override {
    return g_->accepting[decode(s)];
  }

  bool accepting_possible() const override {
    return std::find(g_->accepting.begin(), g_->accepting.end(), true) !=
           g_->accepting.end();
  }

  static StateDescriptor encode(std::uint32_t idx) {
    StateDescriptor d;
    append_u32_le(d, idx);
    return d;
  }

  static std::uint32_t decode(const StateDescriptor& d) {
    return read_u32_le(d, 0);
  }

  const ExplicitGraph& graph() const { return *g_; }

 private:
  const ExplicitGraph* g_;
};

}  // namespace parcheck
