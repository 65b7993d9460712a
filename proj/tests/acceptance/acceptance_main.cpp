// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// hard criterion fails. Run through ctest or directly.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>
#include <unordered_set>
#include <vector>

#include "parcheck/parcheck.hpp"

using namespace parcheck;
namespace fs = std::filesystem;

namespace {

struct Accounting {
  std::uint64_t runs = 0;
  std::uint64_t messaging_violations = 0;
  std::uint64_t counterexamples = 0;
  std::uint64_t invalid_lassos = 0;
  std::uint64_t figure1_violations = 0;
};

Accounting acc;

const std::vector<AlgorithmId> kDetectors{
    AlgorithmId::Ndfs,     AlgorithmId::Owcty, AlgorithmId::Map,
    AlgorithmId::MapOwcty, AlgorithmId::Negc,  AlgorithmId::Bledge};

EngineConfig det_cfg(int workers = 1, std::uint64_t seed = 0) {
  EngineConfig cfg;
  cfg.workers = workers;
  cfg.driver = DriverKind::Deterministic;
  cfg.det_seed = seed;
  return cfg;
}

/// run_algorithm plus the cross-cutting checks of criteria 5 and 6: the
/// messaging identities hold on every run, and every counterexample
/// re-validates against the source.
Verdict checked_run(AlgorithmId id, const GraphSource& src, EngineConfig cfg,
                    const RunOptions& opts = {}) {
  std::uint64_t batch_total = 0, batch_max = 0;
  cfg.on_batch = [&](int, int, std::size_t n, FlushReason) {
    batch_total += n;
    batch_max = std::max<std::uint64_t>(batch_max, n);
  };
  Verdict v = run_algorithm(id, src, cfg, opts);
  ++acc.runs;
  bool ok = v.stats.messages_sent == v.stats.cross_edges &&
            batch_total == v.stats.messages_sent &&
            batch_max <= cfg.buffer_capacity && v.stats.flushes.aged == 0;
  if (!ok) ++acc.messaging_violations;
  if (v.kind == VerdictKind::Counterexample) {
    ++acc.counterexamples;
    if (validate_lasso(v.lasso, src)) ++acc.invalid_lassos;
  }
  return v;
}

void figure1_checks(AlgorithmId id, const ExplicitGraph& g, const Verdict& v) {
  switch (id) {
    case AlgorithmId::Ndfs:
      if (v.stats.edges_traversed > 2 * g.m) ++acc.figure1_violations;
      break;
    case AlgorithmId::Owcty:
      if (v.stats.outer_iterations > g.n) ++acc.figure1_violations;
      break;
    case AlgorithmId::Map: {
      std::uint64_t bound = g.accepting_states().size();
      if (v.stats.outer_iterations > bound) ++acc.figure1_violations;
      break;
    }
    case AlgorithmId::Negc:
      if (v.stats.outer_iterations > g.n + 1) ++acc.figure1_violations;
      break;
    case AlgorithmId::Bledge:
      if (v.nested_searches > v.back_level_edges) ++acc.figure1_violations;
      break;
    default:
      break;
  }
}

int run_detector_matrix(const ExplicitGraph& g) {
  ExplicitSource src(g);
  Verdict expected = tarjan_oracle(src);
  int disagreements = 0;
  for (AlgorithmId id : kDetectors) {
    Verdict v = checked_run(id, src, det_cfg(1));
    if (v.kind != expected.kind) {
      ++disagreements;
      std::fprintf(stderr, "  disagreement: %s said %s, oracle said %s\n",
                   algorithm_name(id), verdict_name(v.kind),
                   verdict_name(expected.kind));
    }
    figure1_checks(id, g, v);
  }
  return disagreements;
}

// --- criterion 1: exhaustive small graphs + 500 random graphs ---

std::vector<std::vector<int>> permutations_fixing_zero(int n) {
  std::vector<int> rest;
  for (int i = 1; i < n; ++i) rest.push_back(i);
  std::vector<std::vector<int>> out;
  do {
    std::vector<int> perm{0};
    perm.insert(perm.end(), rest.begin(), rest.end());
    out.push_back(perm);
  } while (std::next_permutation(rest.begin(), rest.end()));
  return out;
}

bool is_canonical(int n, std::uint32_t edge_mask, std::uint32_t acc_mask,
                  const std::vector<std::vector<int>>& perms) {
  for (const auto& p : perms) {
    std::uint32_t em = 0, am = 0;
    for (int u = 0; u < n; ++u) {
      if (acc_mask & (1u << u)) am |= 1u << p[u];
      for (int v = 0; v < n; ++v)
        if (edge_mask & (1u << (u * n + v))) em |= 1u << (p[u] * n + p[v]);
    }
    if (em < edge_mask || (em == edge_mask && am < acc_mask)) return false;
  }
  return true;
}

bool criterion1(std::uint64_t& exhaustive_count, int& disagreements) {
  disagreements = 0;
  exhaustive_count = 0;
  for (int n = 1; n <= 4; ++n) {
    auto perms = permutations_fixing_zero(n);
    const int cells = n * n;
    for (std::uint32_t edge_mask = 0; edge_mask < (1u << cells); ++edge_mask) {
      if (__builtin_popcount(edge_mask) > 6) continue;
      for (std::uint32_t acc_mask = 0; acc_mask < (1u << n); ++acc_mask) {
        if (!is_canonical(n, edge_mask, acc_mask, perms)) continue;
        ++exhaustive_count;
        ExplicitGraph g;
        g.n = static_cast<std::uint32_t>(n);
        g.init = 0;
        g.accepting.assign(static_cast<std::size_t>(n), false);
        g.adjacency.resize(static_cast<std::size_t>(n));
        for (int u = 0; u < n; ++u) {
          if (acc_mask & (1u << u)) g.accepting[static_cast<std::size_t>(u)] = true;
          for (int v = 0; v < n; ++v)
            if (edge_mask & (1u << (u * n + v)))
              g.add_edge(static_cast<std::uint32_t>(u),
                         static_cast<std::uint32_t>(v));
        }
        disagreements += run_detector_matrix(g);
      }
    }
  }

  for (std::uint64_t i = 0; i < 500; ++i) {
    std::uint32_t n = 10 + static_cast<std::uint32_t>((i * 97) % 1991);
    double deg = 0.5 + 0.5 * static_cast<double>(i % 6);
    double pacc = (i % 5 == 0) ? 0.0 : 0.02 * static_cast<double>(i % 16);
    ExplicitGraph g = generate_random_graph(n, deg, pacc, 1000 + i);
    disagreements += run_detector_matrix(g);
  }
  return disagreements == 0;
}

// --- criterion 2: configuration invariance ---

bool criterion2(int& disagreements) {
  disagreements = 0;
  const std::vector<int> workers{1, 2, 4, 8};
  const std::vector<std::string> slices{"", "0:2", "0:1,2:1"};
  const std::vector<DriverKind> drivers{DriverKind::Deterministic,
                                        DriverKind::Parallel};
  const std::vector<AlgorithmId> algos{AlgorithmId::Owcty, AlgorithmId::Map,
                                       AlgorithmId::MapOwcty, AlgorithmId::Negc,
                                       AlgorithmId::Bledge};
  for (std::uint64_t i = 0; i < 50; ++i) {
    std::uint32_t n = 10 + static_cast<std::uint32_t>((i * 31) % 111);
    double deg = 0.6 + 0.4 * static_cast<double>(i % 5);
    double pacc = (i % 4 == 0) ? 0.0 : 0.1;
    ExplicitGraph g = generate_random_graph(n, deg, pacc, 7000 + i);
    ExplicitSource src(g);
    VerdictKind expected = tarjan_oracle(src).kind;

    Verdict nd = checked_run(AlgorithmId::Ndfs, src, det_cfg(1));
    if (nd.kind != expected) ++disagreements;

    for (AlgorithmId id : algos)
      for (int k : workers)
        for (const std::string& slice : slices)
          for (DriverKind d : drivers) {
            EngineConfig cfg = det_cfg(k, 5);
            cfg.driver = d;
            cfg.slice = parse_slice(slice);
            Verdict v = checked_run(id, src, cfg);
            if (v.kind != expected) {
              ++disagreements;
              std::fprintf(
                  stderr, "  config disagreement: graph %llu %s k=%d slice='%s' %s\n",
                  static_cast<unsigned long long>(i), algorithm_name(id), k,
                  slice.c_str(), d == DriverKind::Parallel ? "par" : "det");
            }
          }
  }
  return disagreements == 0;
}

// --- criterion 3: Figure-1 accounting, plus the weak bound on corpus models ---

std::vector<fs::path> corpus_paths() {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(PARCHECK_MODELS_DIR))
    if (e.path().extension() == ".model") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool criterion3(std::uint64_t& weak_runs) {
  weak_runs = 0;
  for (const fs::path& path : corpus_paths()) {
    if (path.filename() == "bench_grid.model" ||
        path.filename() == "domain_error.model")
      continue;
    Model m = parse_model(slurp(path));
    if (classify_weak(m.property) != WeaknessClass::Weak) continue;
    ModelSource sys(m);
    ProductSource prod(sys, m.property, m.layout);
    RunOptions opts;
    opts.weak_property = true;
    Verdict v = checked_run(AlgorithmId::Owcty, prod, det_cfg(2), opts);
    ++weak_runs;
    if (v.stats.outer_iterations > 2) ++acc.figure1_violations;
  }
  return acc.figure1_violations == 0 && weak_runs >= 5;
}

// --- criterion 4: the on-the-fly column ---

bool criterion4() {
  const std::uint32_t n = 10000;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges{{0, 1}, {1, 1}, {0, 2}};
  for (std::uint32_t i = 2; i + 1 < n; ++i) edges.push_back({i, i + 1});
  ExplicitGraph g = make_graph(n, 0, {1}, edges);
  ExplicitSource src(g);

  bool ok = true;
  for (AlgorithmId id : {AlgorithmId::Map, AlgorithmId::MapOwcty, AlgorithmId::Negc,
                         AlgorithmId::Bledge, AlgorithmId::Ndfs}) {
    Verdict v = checked_run(id, src, det_cfg(1));
    if (v.kind != VerdictKind::Counterexample || v.stats.states_visited >= n) {
      ok = false;
      std::fprintf(stderr, "  %s: %s with %llu states visited (want < %u)\n",
                   algorithm_name(id), verdict_name(v.kind),
                   static_cast<unsigned long long>(v.stats.states_visited), n);
    }
  }
  Verdict v = checked_run(AlgorithmId::Owcty, src, det_cfg(1));
  if (v.kind != VerdictKind::Counterexample || v.stats.states_visited != n) {
    ok = false;
    std::fprintf(stderr, "  owcty: %llu states visited (want exactly %u)\n",
                 static_cast<unsigned long long>(v.stats.states_visited), n);
  }
  return ok;
}

// --- criterion 7: deterministic-driver reproducibility ---

bool criterion7() {
  int diffs = 0;
  ExplicitGraph g = generate_random_graph(600, 2.0, 0.1, 424242);
  ExplicitSource src(g);
  for (AlgorithmId id : kDetectors) {
    for (int k : {1, 3}) {
      if (id == AlgorithmId::Ndfs && k != 1) continue;
      EngineConfig cfg = det_cfg(k, 17);
      cfg.buffer_capacity = 16;
      cfg.poll_interval = 8;
      Verdict a = checked_run(id, src, cfg);
      Verdict b = checked_run(id, src, cfg);
      std::string ja = stats_json(a.stats, a.kind, false).dump();
      std::string jb = stats_json(b.stats, b.kind, false).dump();
      if (ja != jb) {
        ++diffs;
        std::fprintf(stderr, "  %s k=%d: %s vs %s\n", algorithm_name(id), k,
                     ja.c_str(), jb.c_str());
      }
    }
  }
  Model m = parse_model(slurp(fs::path(PARCHECK_MODELS_DIR) / "peterson_safe.model"));
  ModelSource sys(m);
  ProductSource prod(sys, m.property, m.layout);
  Verdict a = checked_run(AlgorithmId::MapOwcty, prod, det_cfg(4, 3));
  Verdict b = checked_run(AlgorithmId::MapOwcty, prod, det_cfg(4, 3));
  if (stats_json(a.stats, a.kind, false).dump() !=
      stats_json(b.stats, b.kind, false).dump())
    ++diffs;
  return diffs == 0;
}

// --- criterion 8: desk-scale scalability smoke test ---
//
// The speedup thresholds presume at least 4 hardware cores. The measurement
// always runs and is always reported; the speedup gate is applied only when
// the hardware precondition holds, since 4 threads on fewer cores cannot
// outrun 1 thread no matter how good the engine is.

bool criterion8(double& speedup, double& total_secs, std::uint64_t& states,
                unsigned& cores, bool& speedup_gated, bool& informative_met) {
  Model m = parse_model(slurp(fs::path(PARCHECK_MODELS_DIR) / "bench_grid.model"));
  ModelSource sys(m);
  ProductSource prod(sys, m.property, m.layout);
  EngineConfig c1;
  c1.workers = 1;
  c1.driver = DriverKind::Parallel;
  auto t0 = std::chrono::steady_clock::now();
  Verdict v1 = run_algorithm(AlgorithmId::Reach, prod, c1);
  EngineConfig c4 = c1;
  c4.workers = 4;
  Verdict v4 = run_algorithm(AlgorithmId::Reach, prod, c4);
  auto t1 = std::chrono::steady_clock::now();

  cores = std::thread::hardware_concurrency();
  states = v1.stats.states_visited;
  total_secs = std::chrono::duration<double>(t1 - t0).count();
  speedup = v4.stats.wall_time_ms > 0
                ? static_cast<double>(v1.stats.wall_time_ms) /
                      static_cast<double>(v4.stats.wall_time_ms)
                : 1.0;
  speedup_gated = cores >= 4;
  informative_met = speedup >= 1.3;
  bool same_count = v1.stats.states_visited == v4.stats.states_visited;
  bool ok = states >= 500000 && total_secs < 120.0 && same_count;
  if (speedup_gated) ok = ok && speedup >= 1.0;
  return ok;
}

// --- criterion 9: parser corpus, round trips and brute-force counts ---

std::uint64_t brute_force_count(const GraphSource& src) {
  std::unordered_set<StateDescriptor, DescriptorHash> seen;
  std::deque<StateDescriptor> queue;
  seen.insert(src.initial());
  queue.push_back(src.initial());
  while (!queue.empty()) {
    StateDescriptor s = std::move(queue.front());
    queue.pop_front();
    Expansion e = src.successors(s);
    for (StateDescriptor& t : e.states)
      if (seen.insert(t).second) queue.push_back(t);
  }
  return seen.size();
}

bool criterion9(std::uint64_t& models_checked) {
  models_checked = 0;
  bool ok = true;
  for (const fs::path& path : corpus_paths()) {
    if (path.filename() == "bench_grid.model" ||
        path.filename() == "domain_error.model")
      continue;  // too large for brute force / aborts with a model error
    std::string text = slurp(path);
    Model m = parse_model(text);
    std::string printed = pretty_print(m);
    if (pretty_print(parse_model(printed)) != printed) {
      std::fprintf(stderr, "  %s: pretty-print round trip unstable\n",
                   path.filename().string().c_str());
      ok = false;
      continue;
    }
    ModelSource sys(m);
    ProductSource prod(sys, m.property, m.layout);
    std::uint64_t expected = brute_force_count(prod);
    Verdict v = checked_run(AlgorithmId::Reach, prod, det_cfg(2));
    if (v.stats.states_visited != expected) {
      std::fprintf(stderr, "  %s: reach saw %llu states, brute force %llu\n",
                   path.filename().string().c_str(),
                   static_cast<unsigned long long>(v.stats.states_visited),
                   static_cast<unsigned long long>(expected));
      ok = false;
    }
    ++models_checked;
  }
  return ok && models_checked >= 10;
}

// --- CLI contract (spec examples; supplementary to the numbered criteria) ---

int run_cli(const std::string& args) {
  std::string cmd = std::string(PARCHECK_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WEXITSTATUS(status);
}

bool cli_contract(const fs::path& tmp) {
  bool ok = true;
  fs::path dag = tmp / "dag.graph";
  {
    std::ofstream out(dag);
    out << "STATES 4\nINIT 0\nACC 2\nEDGES\n0 1\n1 2\n2 3\n";
  }
  ok &= run_cli("verify " + dag.string() + " --algorithm owcty --workers 4") == 0;
  ok &= run_cli("verify " + dag.string() + " --algorithm ndfs --workers 2") == 2;
  ok &= run_cli("verify " + dag.string() + " --algorithm nosuch") == 2;
  ok &= run_cli("verify /nonexistent.graph") == 2;
  ok &= run_cli("verify " + dag.string() + " --property x.prop") == 2;

  fs::path model = fs::path(PARCHECK_MODELS_DIR) / "mutex_naive_live.model";
  fs::path lasso = tmp / "ce.json";
  fs::path stats = tmp / "stats.json";
  ok &= run_cli("verify " + model.string() + " --algorithm map-owcty --lasso-out " +
                lasso.string() + " --stats-out " + stats.string()) == 1;
  ok &= fs::exists(lasso) && fs::exists(stats);
  ok &= run_cli("validate " + model.string() + " --lasso " + lasso.string()) == 0;

  ok &= run_cli("verify " +
                (fs::path(PARCHECK_MODELS_DIR) / "domain_error.model").string()) == 3;

  fs::path g1 = tmp / "g1.graph", g2 = tmp / "g2.graph";
  ok &= run_cli("gen --n 1 --deg 0 --pacc 0 --seed 7 --out " + g1.string()) == 0;
  ok &= run_cli("gen --n 1 --deg 0 --pacc 0 --seed 7 --out " + g2.string()) == 0;
  ok &= slurp(g1) == slurp(g2) && slurp(g1).find("STATES 1") == 0;

  ok &= run_cli("gen --n 1000 --deg 2 --pacc 0.1 --seed 3 --out " + g1.string()) == 0;
  int first = run_cli("oracle " + g1.string());
  for (const char* algo : {"ndfs", "owcty", "map", "map-owcty", "negc", "bledge"}) {
    int code = run_cli("verify " + g1.string() + " --algorithm " + algo +
                       (std::string(algo) == "ndfs" ? " --workers 1" : " --workers 3"));
    if (code != first) ok = false;
  }

  // PARCHECK_WORKERS provides the default worker count: 2 workers break ndfs
  {
    std::string cmd = "PARCHECK_WORKERS=2 " + std::string(PARCHECK_CLI_PATH) +
                      " verify " + dag.string() + " --algorithm ndfs >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    ok &= status != -1 && WEXITSTATUS(status) == 2;
  }

  // --kind overrides extension-based inference
  fs::path odd = tmp / "dag.txt";
  fs::copy_file(dag, odd, fs::copy_options::overwrite_existing);
  ok &= run_cli("verify " + odd.string()) == 2;  // kind not inferable
  ok &= run_cli("verify " + odd.string() + " --kind graph") == 0;

  // verify --driver det --det-seed S is reproducible including stats
  fs::path s1 = tmp / "s1.json", s2 = tmp / "s2.json";
  std::string det_args = " --algorithm map-owcty --workers 3 --driver det "
                         "--det-seed 11 --stats-out ";
  ok &= run_cli("verify " + g1.string() + det_args + s1.string()) ==
        run_cli("verify " + g1.string() + det_args + s2.string());
  {
    nlohmann::json a = nlohmann::json::parse(slurp(s1));
    nlohmann::json b = nlohmann::json::parse(slurp(s2));
    a.erase("wall_time_ms");
    b.erase("wall_time_ms");
    ok &= a.dump() == b.dump();
  }
  return ok;
}

}  // namespace

int main() {
  bool all = true;
  auto report = [&](int id, bool pass, const std::string& detail) {
    all = all && pass;
    std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", id,
                detail.c_str());
    std::fflush(stdout);
  };

  auto started = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
        .count();
  };

  {
    std::uint64_t exhaustive = 0;
    int disagreements = 0;
    bool ok = criterion1(exhaustive, disagreements);
    std::ostringstream d;
    d << "oracle unanimity on " << exhaustive
      << " exhaustive small graphs + 500 random graphs, " << disagreements
      << " disagreements (" << static_cast<int>(elapsed()) << "s)";
    report(1, ok, d.str());
  }

  {
    double before = elapsed();
    int disagreements = 0;
    bool ok = criterion2(disagreements);
    std::ostringstream d;
    d << "verdicts invariant over k in {1,2,4,8} x 3 slices x 2 drivers on 50 "
         "graphs, "
      << disagreements << " disagreements (" << static_cast<int>(elapsed() - before)
      << "s)";
    report(2, ok, d.str());
  }

  {
    std::uint64_t weak_runs = 0;
    bool ok = criterion3(weak_runs);
    std::ostringstream d;
    d << "counter bounds (ndfs<=2M, owcty<=N and <=2 weak, map<=|acc|, "
         "negc<=N+1), "
      << acc.figure1_violations << " violations, " << weak_runs
      << " weak corpus inputs";
    report(3, ok, d.str());
  }

  report(4, criterion4(),
         "early-cycle graph (N=10^4): map, map-owcty, negc, bledge, ndfs stop "
         "short of N; owcty visits all N");

  {
    std::ostringstream d;
    d << acc.counterexamples << " counterexamples extracted, "
      << acc.invalid_lassos << " failed validation";
    report(5, acc.invalid_lassos == 0 && acc.counterexamples > 1000, d.str());
  }

  {
    std::ostringstream d;
    d << "messages_sent == cross_edges, sum(batches) == messages_sent, batch "
         "<= B, flushes_aged == 0 over "
      << acc.runs << " runs, " << acc.messaging_violations << " violations";
    report(6, acc.messaging_violations == 0, d.str());
  }

  report(7, criterion7(),
         "byte-identical stats JSON (wall time excluded) across repeated "
         "deterministic runs");

  {
    double speedup = 0, total = 0;
    std::uint64_t states = 0;
    unsigned cores = 0;
    bool gated = false, informative = false;
    bool ok = criterion8(speedup, total, states, cores, gated, informative);
    std::ostringstream d;
    d << "reach on " << states << " product states: 4-worker speedup "
      << std::fixed << std::setprecision(2) << speedup << "x in "
      << static_cast<int>(total) << "s";
    if (!gated)
      d << " [speedup gate not applicable: " << cores
        << " hardware core(s), criterion presumes 4]";
    else if (!informative)
      d << " [WARN: below the 1.3x informative threshold]";
    report(8, ok, d.str());
  }

  {
    std::uint64_t models = 0;
    bool ok = criterion9(models);
    std::ostringstream d;
    d << models
      << " corpus models parse, round-trip, and match brute-force state counts";
    report(9, ok, d.str());
  }

  {
    fs::path tmp = fs::temp_directory_path() / "parcheck_acceptance";
    fs::create_directories(tmp);
    bool ok = cli_contract(tmp);
    all = all && ok;
    std::printf("[%s] cli: exit codes 0/1/2/3, gen determinism, lasso "
                "validation, unanimous verdicts\n",
                ok ? "PASS" : "FAIL");
  }

  std::printf("%s (%ds)\n", all ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED",
              static_cast<int>(elapsed()));
  return all ? 0 : 1;
}
