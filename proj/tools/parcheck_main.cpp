// parcheck: parallel explicit-state LTL model checking on guarded-command
// models and explicit Buchi graphs.
//
// Exit codes: 0 property holds, 1 counterexample found, 2 usage or input
// error, 3 model error (a transition left a variable domain).

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "parcheck/parcheck.hpp"

namespace {

using namespace parcheck;

constexpr int kExitHolds = 0;
constexpr int kExitCounterexample = 1;
constexpr int kExitUsage = 2;
constexpr int kExitModelError = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Sources keep pointers into the model/graph, so those live on the heap and
// keep their addresses when a LoadedInput moves.
struct LoadedInput {
  std::unique_ptr<Model> model;
  std::unique_ptr<ExplicitGraph> graph;
  std::unique_ptr<ModelSource> system;
  std::unique_ptr<GraphSource> source;  // what the algorithms run on

  const Model* model_for_render() const { return model.get(); }
};

std::string infer_kind(const std::string& path, const std::string& explicit_kind) {
  if (!explicit_kind.empty()) return explicit_kind;
  auto dot = path.rfind('.');
  std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  if (ext == "model") return "model";
  if (ext == "graph") return "graph";
  throw ConfigError("cannot infer input kind from '" + path +
                    "'; pass --kind model|graph");
}

LoadedInput load_input(const std::string& path, const std::string& kind_flag) {
  LoadedInput in;
  std::string kind = infer_kind(path, kind_flag);
  std::string text = read_file(path);
  if (kind == "model") {
    in.model = std::make_unique<Model>(parse_model(text));
    in.system = std::make_unique<ModelSource>(*in.model);
    in.source = std::make_unique<ProductSource>(*in.system, in.model->property,
                                                in.model->layout);
  } else if (kind == "graph") {
    in.graph = std::make_unique<ExplicitGraph>(load_explicit_graph(text));
    in.source = std::make_unique<ExplicitSource>(*in.graph);
  } else {
    throw ConfigError("unknown input kind '" + kind + "'");
  }
  return in;
}

std::uint64_t parse_u64_flag(const std::string& s) {
  return std::stoull(s, nullptr, 0);  // accepts decimal and 0x-hex
}

int default_workers() {
  if (const char* env = std::getenv("PARCHECK_WORKERS")) {
    int k = std::atoi(env);
    if (k >= 1) return k;
  }
  return 1;
}

struct CommonOpts {
  std::string input;
  std::string kind;
  std::string algorithm = "map-owcty";
  int workers = default_workers();
  std::size_t buffer = 1024;
  std::size_t poll = 64;
  std::string slice;
  std::string hash_seed = "0xcbf29ce484222325";
  std::string driver = "par";
  std::uint64_t det_seed = 0;
  std::string stats_out;
  std::string lasso_out;
  std::string property_file;
};

void add_engine_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--workers", o.workers, "worker count (default: $PARCHECK_WORKERS or 1)");
  cmd->add_option("--buffer", o.buffer, "outgoing buffer capacity in states");
  cmd->add_option("--poll", o.poll, "states processed between inbox polls");
  cmd->add_option("--slice", o.slice, "descriptor slice off:len[,off:len...] fed to the partition hash");
  cmd->add_option("--hash-seed", o.hash_seed, "partition hash seed (decimal or 0x-hex)");
  cmd->add_option("--driver", o.driver, "det | par")->check(CLI::IsMember({"det", "par"}));
  cmd->add_option("--det-seed", o.det_seed, "schedule seed for the deterministic driver");
}

EngineConfig engine_config(const CommonOpts& o) {
  EngineConfig cfg;
  cfg.workers = o.workers;
  cfg.buffer_capacity = o.buffer;
  cfg.poll_interval = o.poll;
  cfg.slice = parse_slice(o.slice);
  cfg.hash_seed = parse_u64_flag(o.hash_seed);
  cfg.driver = o.driver == "det" ? DriverKind::Deterministic : DriverKind::Parallel;
  cfg.det_seed = o.det_seed;
  return cfg;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
}

void emit_stats(const CommonOpts& o, const Verdict& v) {
  nlohmann::json j = stats_json(v.stats, v.kind);
  std::cout << "stats " << j.dump() << "\n";
  if (!o.stats_out.empty()) write_text(o.stats_out, j.dump() + "\n");
}

int finish_verdict(const CommonOpts& o, const LoadedInput& in, const Verdict& v) {
  emit_stats(o, v);
  switch (v.kind) {
    case VerdictKind::Holds:
      std::cout << "verdict: HOLDS (no accepting cycle)\n";
      return kExitHolds;
    case VerdictKind::Counterexample: {
      std::cout << "verdict: COUNTEREXAMPLE (prefix " << v.lasso.prefix.size()
                << " states, cycle " << v.lasso.cycle.size() << " states)\n";
      nlohmann::json lj = lasso_json(v.lasso, in.model_for_render());
      if (!o.lasso_out.empty())
        write_text(o.lasso_out, lj.dump(2) + "\n");
      else
        std::cout << "lasso " << lj.dump() << "\n";
      return kExitCounterexample;
    }
    case VerdictKind::ModelError: {
      std::cout << "verdict: MODEL_ERROR: " << v.message << "\n";
      for (const StateDescriptor& d : v.trace) {
        std::cout << "  " << to_hex(d);
        if (in.model) std::cout << "  (" << render_state(*in.model, d) << ")";
        std::cout << "\n";
      }
      return kExitModelError;
    }
  }
  return kExitUsage;
}

int cmd_verify(const CommonOpts& o) {
  if (!o.property_file.empty())
    throw ConfigError("--property is not supported: graph inputs are already "
                      "products, and models embed their property section");
  LoadedInput in = load_input(o.input, o.kind);
  auto algo = parse_algorithm(o.algorithm);
  if (!algo) throw ConfigError("unknown algorithm '" + o.algorithm + "'");

  RunOptions opts;
  if (in.model) {
    opts.weak_property = classify_weak(in.model->property) == WeaknessClass::Weak;
    std::cout << "property class: " << (opts.weak_property ? "weak" : "general")
              << "\n";
  }
  Verdict v = run_algorithm(*algo, *in.source, engine_config(o), opts);
  return finish_verdict(o, in, v);
}

int cmd_oracle(const CommonOpts& o) {
  LoadedInput in = load_input(o.input, o.kind);
  Verdict v = tarjan_oracle(*in.source);
  return finish_verdict(o, in, v);
}

int cmd_gen(std::uint32_t n, double deg, double pacc, std::uint64_t seed,
            const std::string& out) {
  ExplicitGraph g = generate_random_graph(n, deg, pacc, seed);
  std::string text = serialize_graph(g);
  if (out.empty())
    std::cout << text;
  else
    write_text(out, text);
  return kExitHolds;
}

int cmd_validate(const CommonOpts& o, const std::string& lasso_file) {
  LoadedInput in = load_input(o.input, o.kind);
  nlohmann::json j = nlohmann::json::parse(read_file(lasso_file));
  Lasso l = lasso_from_json(j);
  auto violation = validate_lasso(l, *in.source);
  if (violation) {
    std::cout << "INVALID: " << *violation << "\n";
    return kExitCounterexample;
  }
  std::cout << "VALID\n";
  return kExitHolds;
}

int cmd_bench(const CommonOpts& o, const std::string& workers_list,
              const std::string& out) {
  LoadedInput in = load_input(o.input, o.kind);
  auto algo = parse_algorithm(o.algorithm);
  if (!algo) throw ConfigError("unknown algorithm '" + o.algorithm + "'");

  std::vector<int> ks;
  std::stringstream ss(workers_list);
  std::string tok;
  while (std::getline(ss, tok, ',')) ks.push_back(std::stoi(tok));
  if (ks.empty()) throw ConfigError("empty --workers-list");

  nlohmann::json report = nlohmann::json::array();
  double t1 = 0;
  std::cout << std::left << std::setw(8) << "Cores" << std::setw(14)
            << "Runtime (s)" << std::setw(10) << "Speedup" << "Efficiency\n";
  for (std::size_t i = 0; i < ks.size(); ++i) {
    CommonOpts run = o;
    run.workers = ks[i];
    run.driver = "par";
    Verdict v = run_algorithm(*algo, *in.source, engine_config(run), {});
    double secs = static_cast<double>(v.stats.wall_time_ms) / 1000.0;
    if (i == 0) t1 = secs * ks[0];  // normalize in case the list skips 1
    double speedup = secs > 0 ? t1 / secs : 0;
    double efficiency = speedup / ks[i] * 100.0;
    std::cout << std::left << std::setw(8) << ks[i] << std::setw(14)
              << std::fixed << std::setprecision(2) << secs << std::setw(10)
              << speedup << std::setprecision(0) << efficiency << "%\n"
              << std::setprecision(2);
    report.push_back({{"workers", ks[i]},
                      {"runtime_s", secs},
                      {"speedup", speedup},
                      {"efficiency_pct", efficiency},
                      {"states", v.stats.states_visited}});
  }
  if (!out.empty()) write_text(out, report.dump(2) + "\n");
  return kExitHolds;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"parcheck: parallel explicit-state LTL model checker"};
  app.require_subcommand(1);

  CommonOpts o;

  auto* verify = app.add_subcommand("verify", "check a model or explicit graph");
  verify->add_option("input", o.input, "input file (.model or .graph)")->required();
  verify->add_option("--kind", o.kind, "model | graph (default: by extension)");
  verify->add_option("--algorithm", o.algorithm,
                     "reach | ndfs | owcty | map | map-owcty | negc | bledge");
  verify->add_option("--stats-out", o.stats_out, "write stats JSON here");
  verify->add_option("--lasso-out", o.lasso_out, "write counterexample JSON here");
  verify->add_option("--property", o.property_file,
                     "external property automaton (not supported)");
  add_engine_flags(verify, o);

  auto* oracle = app.add_subcommand("oracle", "sequential SCC ground truth");
  oracle->add_option("input", o.input)->required();
  oracle->add_option("--kind", o.kind);
  oracle->add_option("--stats-out", o.stats_out);
  oracle->add_option("--lasso-out", o.lasso_out);

  std::uint32_t gen_n = 1;
  double gen_deg = 0, gen_pacc = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "generate a random graph file");
  gen->add_option("--n", gen_n, "state count")->required();
  gen->add_option("--deg", gen_deg, "average out-degree");
  gen->add_option("--pacc", gen_pacc, "acceptance probability");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out", gen_out, "output file (default: stdout)");

  std::string lasso_file;
  auto* validate = app.add_subcommand("validate", "re-check a lasso against its input");
  validate->add_option("input", o.input)->required();
  validate->add_option("--kind", o.kind);
  validate->add_option("--lasso", lasso_file, "lasso JSON file")->required();

  std::string workers_list = "1,2,4";
  std::string bench_out;
  auto* bench = app.add_subcommand("bench", "scaling report over worker counts");
  bench->add_option("input", o.input)->required();
  bench->add_option("--kind", o.kind);
  bench->add_option("--algorithm", o.algorithm);
  bench->add_option("--workers-list", workers_list, "comma-separated worker counts");
  bench->add_option("--out", bench_out, "write the report as JSON here");

  try {
    app.parse(argc, argv);
    if (verify->parsed()) return cmd_verify(o);
    if (oracle->parsed()) return cmd_oracle(o);
    if (gen->parsed()) return cmd_gen(gen_n, gen_deg, gen_pacc, gen_seed, gen_out);
    if (validate->parsed()) return cmd_validate(o, lasso_file);
    if (bench->parsed()) return cmd_bench(o, workers_list, bench_out);
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitHolds : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
