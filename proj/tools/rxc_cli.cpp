// rxc: generate, solve and analyse random regular exact cover instances.
//
// Exit status: 0 success, 1 domain error, 2 usage error.

#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rxc/rxc.hpp"

namespace {

constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::int64_t n = 0;
  int k = 0;
  int d = 0;
  std::uint64_t seed = 0;
  std::string out;
  std::string input;
  std::string mode = "count";
  bool decide = false, count = false, enumerate = false;
  std::uint64_t node_budget = rxc::kDefaultNodeBudget;
  int max_i = rxc::kDefaultCycleBound;
  std::string format = "kv";

  std::string kind;
  std::vector<int> ks, ds;
  std::vector<std::int64_t> ns;
  std::vector<std::int64_t> n_list;
  std::int64_t trials = 100;
  unsigned workers = 0;
};

// Writes to --out when given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw rxc::error(rxc::errc::invalid_params, "cannot open '" + path + "' for writing");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

rxc::FormulaInstance load(const std::string& path) {
  if (path.empty() || path == "-") return rxc::read_instance(std::cin);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw rxc::error(rxc::errc::invalid_params, "cannot open '" + path + "'");
  return rxc::read_instance(in);
}

void run_gen(const Options& o) {
  const auto f = rxc::generate(rxc::ModelParams::checked(o.n, o.k, o.d), o.seed);
  Sink sink(o.out);
  rxc::write_instance(f, sink.stream());
}

rxc::SolveMode solve_mode(const Options& o) {
  if (o.decide) return rxc::SolveMode::decide;
  if (o.enumerate) return rxc::SolveMode::enumerate;
  if (o.count) return rxc::SolveMode::count;
  if (o.mode == "decide") return rxc::SolveMode::decide;
  if (o.mode == "enumerate") return rxc::SolveMode::enumerate;
  return rxc::SolveMode::count;
}

void run_solve(const Options& o) {
  const auto f = load(o.input);
  const auto result = rxc::solve(f, rxc::SolveOptions{solve_mode(o), o.node_budget});
  Sink sink(o.out);
  rxc::write_result(result, sink.stream());
}

void run_theory(const Options& o) {
  const auto report = rxc::theory::make_report(o.k, o.d, o.max_i);
  Sink sink(o.out);
  if (o.format == "csv") rxc::theory::write_report_csv(report, sink.stream());
  else rxc::theory::write_report_kv(report, sink.stream());
}

void run_cycles(const Options& o) {
  const auto f = o.input.empty() ? rxc::generate(rxc::ModelParams::checked(o.n, o.k, o.d), o.seed) : load(o.input);
  const auto c = rxc::census(f, o.max_i);
  Sink sink(o.out);
  if (o.format == "csv") rxc::write_census_csv(c, sink.stream());
  else rxc::write_census_kv(c, sink.stream());
}

void run_experiment(const Options& o) {
  rxc::experiments::ExperimentConfig cfg;
  cfg.kind = rxc::experiments::parse_kind(o.kind);
  cfg.ks = o.ks;
  cfg.ds = o.ds;
  cfg.ns = o.n_list.empty() ? o.ns : o.n_list;
  cfg.trials = o.trials;
  cfg.master_seed = o.seed;
  cfg.node_budget = o.node_budget;
  cfg.workers = o.workers;
  cfg.max_i = o.max_i;
  const auto result = rxc::experiments::run(cfg);
  Sink sink(o.out);
  rxc::experiments::write_csv(result, sink.stream());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random regular exact cover: generator, exact solver, theory and experiments"};
  app.require_subcommand(1, 1);
  Options o;

  auto* gen = app.add_subcommand("gen", "Generate a configuration-model instance");
  gen->add_option("-k", o.k, "Clause width")->required();
  gen->add_option("-d", o.d, "Variable degree")->required();
  gen->add_option("-n", o.n, "Number of variables")->required();
  gen->add_option("--seed", o.seed, "Generator seed")->capture_default_str();
  gen->add_option("-o,--out", o.out, "Output file (default stdout)");

  auto* solve = app.add_subcommand("solve", "Decide, count or enumerate exact covers of an instance file");
  solve->add_option("file", o.input, "Instance file, '-' for stdin");
  solve->add_option("--mode", o.mode, "decide|count|enumerate")
      ->check(CLI::IsMember({"decide", "count", "enumerate"}))
      ->capture_default_str();
  auto* f_decide = solve->add_flag("--decide", o.decide, "Same as --mode decide");
  auto* f_count = solve->add_flag("--count", o.count, "Same as --mode count");
  auto* f_enum = solve->add_flag("--enumerate", o.enumerate, "Same as --mode enumerate");
  f_decide->excludes(f_count)->excludes(f_enum);
  f_count->excludes(f_enum);
  solve->add_option("--node-budget", o.node_budget, "Search node limit")->capture_default_str();
  solve->add_option("-o,--out", o.out, "Output file (default stdout)");

  auto* theory = app.add_subcommand("theory", "Print closed-form quantities for (k, d)");
  theory->add_option("-k", o.k, "Clause width")->required();
  theory->add_option("-d", o.d, "Variable degree")->required();
  theory->add_option("--max-i", o.max_i, "Number of cycle lengths to report")->capture_default_str();
  theory->add_option("--format", o.format, "kv|csv")->check(CLI::IsMember({"kv", "csv"}))->capture_default_str();
  theory->add_option("-o,--out", o.out, "Output file (default stdout)");

  auto* cycles = app.add_subcommand("cycles", "Count short cycles of an instance file or a generated instance");
  cycles->add_option("file", o.input, "Instance file; omit to generate from -k -d -n --seed");
  cycles->add_option("-k", o.k, "Clause width");
  cycles->add_option("-d", o.d, "Variable degree");
  cycles->add_option("-n", o.n, "Number of variables");
  cycles->add_option("--seed", o.seed, "Generator seed")->capture_default_str();
  cycles->add_option("--max-i", o.max_i, "Longest cycle half-length")->capture_default_str();
  cycles->add_option("--format", o.format, "kv|csv")->check(CLI::IsMember({"kv", "csv"}))->capture_default_str();
  cycles->add_option("-o,--out", o.out, "Output file (default stdout)");

  auto* experiment = app.add_subcommand("experiment", "Run a Monte Carlo experiment and write CSV");
  experiment->add_option("kind", o.kind, "psat|moments|cycles|overlap")
      ->required()
      ->check(CLI::IsMember({"psat", "moments", "cycles", "overlap"}));
  experiment->add_option("-k", o.ks, "Clause widths (comma-separated)")->delimiter(',')->required();
  experiment->add_option("-d", o.ds, "Variable degrees (comma-separated)")->delimiter(',')->required();
  auto* n_opt = experiment->add_option("-n", o.ns, "Variable counts (comma-separated)")->delimiter(',');
  auto* n_list = experiment->add_option("--n-list", o.n_list, "Variable-count ladder (comma-separated)")->delimiter(',');
  n_opt->excludes(n_list);
  experiment->add_option("--trials", o.trials, "Trials per cell")->capture_default_str();
  experiment->add_option("--seed", o.seed, "Master seed")->capture_default_str();
  experiment->add_option("--node-budget", o.node_budget, "Search node limit per trial")->capture_default_str();
  experiment->add_option("--workers", o.workers, "Worker threads (0 = available parallelism)")->capture_default_str();
  experiment->add_option("--max-i", o.max_i, "Cycle lengths to test (cycles only)");
  experiment->add_option("--format", o.format, "csv")->check(CLI::IsMember({"csv"}));
  experiment->add_option("-o,--out", o.out, "Output file (default stdout)");
  o.max_i = rxc::kDefaultCycleBound;

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen) run_gen(o);
    else if (*solve) run_solve(o);
    else if (*theory) run_theory(o);
    else if (*cycles) {
      if (o.input.empty() && (o.k == 0 || o.d == 0 || o.n == 0)) {
        std::cerr << "cycles: give an instance file or all of -k -d -n\n";
        return kExitUsage;
      }
      run_cycles(o);
    } else if (*experiment) {
      if (o.ns.empty() && o.n_list.empty()) {
        std::cerr << "experiment: -n or --n-list is required\n";
        return kExitUsage;
      }
      if (experiment->count("--max-i") == 0) o.max_i = 3;
      run_experiment(o);
    }
  } catch (const rxc::error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return 0;
}
