// Command-line entry point. Exit codes: 0 success or positive verdict,
// 1 runtime error, 2 usage error, 3 negative verdict.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "perturb/edge_list.hpp"
#include "perturb/exact.hpp"
#include "perturb/expansion.hpp"
#include "perturb/generators.hpp"
#include "perturb/harness.hpp"
#include "perturb/posa.hpp"
#include "perturb/random.hpp"

using namespace perturb;

namespace {

constexpr int kOk = 0;
constexpr int kRuntime = 1;
constexpr int kUsage = 2;
constexpr int kNegative = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(flag + ": cannot parse '" + item + "' as a number");
    }
  }
  if (out.empty()) throw UsageError(flag + ": empty list");
  return out;
}

// Reads "key = value" lines ('#' starts a comment) into "--key=value" tokens.
std::vector<std::string> config_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("--config: cannot open " + path);
  std::vector<std::string> out;
  std::string line;
  std::size_t line_no = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError("--config: " + path + " line " + std::to_string(line_no) +
                       ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw UsageError("--config: " + path + " line " + std::to_string(line_no) + ": empty key");
    out.push_back("--" + key + "=" + value);
  }
  return out;
}

// Moves "--config FILE" out of the subcommand arguments and splices the file's
// entries in front of them, so explicit flags (parsed later) win.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  if (args.size() < 2) return args;
  std::vector<std::string> rest;
  std::optional<std::string> config;
  for (std::size_t i = 2; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file argument");
      config = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  std::vector<std::string> out{args[0], args[1]};
  if (config) {
    const auto tokens = config_tokens(*config);
    out.insert(out.end(), tokens.begin(), tokens.end());
  }
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

// Graph source shared by solve and certify: a file or a generated perturbed graph.
struct GraphSource {
  std::string path;
  std::size_t n = 0;
  double p = -1;
  double lambda = -1;
  double alpha = 0.1;
  std::string family = "none";
  std::uint64_t seed = 0;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--graph", path, "Edge-list file")->check(CLI::ExistingFile);
    cmd->add_option("--n", n, "Vertex count for a generated graph")->check(CLI::PositiveNumber);
    cmd->add_option("--p", p, "Random edge probability")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--lambda", lambda, "Random edge probability times n")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--alpha", alpha, "Seed density parameter")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--family", family, "Seed graph: none, bipartite or clique-blobs")
        ->check(CLI::IsMember({"none", "bipartite", "clique-blobs"}));
    cmd->add_option("--seed", seed, "Master seed");
  }

  double probability() const {
    if (p >= 0 && lambda >= 0) throw UsageError("--p and --lambda are mutually exclusive");
    if (lambda >= 0) {
      const double q = lambda / static_cast<double>(n);
      if (q > 1.0) throw UsageError("--lambda: lambda / n exceeds 1");
      return q;
    }
    return p >= 0 ? p : 0.0;
  }

  Graph seed_graph() const {
    const SeedFamily f = parse_seed_family(family);
    if (f == SeedFamily::bipartite) return unbalanced_bipartite(n, alpha).graph;
    if (f == SeedFamily::clique_blobs) return clique_blobs(n, alpha);
    return Graph(n);
  }

  Graph load() const {
    if (!path.empty()) {
      if (n != 0 || p >= 0 || lambda >= 0)
        throw UsageError("--graph conflicts with generator flags");
      return read_edge_list(path);
    }
    if (n == 0) throw UsageError("need --graph or --n");
    Graph g = seed_graph();
    RngStream rng(seed, 0);
    add_edges(g, sample_gnp_edges(n, probability(), rng));
    return g;
  }
};

std::string join(std::span<const Vertex> vs) {
  std::string s;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(vs[i]);
  }
  return s;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void open_out(std::ofstream& f, const std::string& path, const std::string& flag) {
  f.open(path, std::ios::binary);
  if (!f) throw std::runtime_error(flag + ": cannot write " + path);
}

// sample ---------------------------------------------------------------------

struct SampleArgs {
  GraphSource src;
  std::string out;
};

int cmd_sample(const SampleArgs& a) {
  const Graph g = a.src.load();
  if (a.out.empty()) {
    write_edge_list(std::cout, g);
  } else {
    std::ofstream f;
    open_out(f, a.out, "--out");
    write_edge_list(f, g);
  }
  return kOk;
}

// solve ----------------------------------------------------------------------

struct SolveArgs {
  GraphSource src;
  bool exact = false;
  std::string certificate;
  std::size_t rotation_cap = 0;
  bool single_closure = false;
};

int cmd_solve(const SolveArgs& a) {
  const Graph g = a.src.load();
  HamiltonResult result;
  std::string verdict;
  std::string detail;
  if (a.exact) {
    if (auto cycle = hamilton_cycle_exact(g)) {
      result.verdict = HamiltonResult::Verdict::found;
      result.cycle = *cycle;
      verdict = "HAMILTONIAN";
    } else {
      verdict = "NON-HAMILTONIAN";
    }
  } else if (g.vertex_count() < 3) {
    verdict = "NON-HAMILTONIAN";
    detail = "fewer than 3 vertices";
  } else if (!is_connected(g)) {
    verdict = "NON-HAMILTONIAN";
    detail = "disconnected";
  } else {
    EngineOptions opts;
    opts.rotation_cap = a.rotation_cap;
    opts.double_closure = !a.single_closure;
    result = sprinkle(g, {}, opts);
    if (result.verdict == HamiltonResult::Verdict::found) {
      verdict = "HAMILTONIAN";
    } else {
      verdict = "EXHAUSTED";
      detail = "longest path found has " + std::to_string(result.best_path_vertices) +
               " vertices; not a proof of non-Hamiltonicity";
    }
  }
  if (result.verdict == HamiltonResult::Verdict::found && !verify_hamilton_cycle(g, result.cycle))
    throw std::logic_error("solver returned an invalid cycle");

  std::cout << verdict << '\n';
  if (!detail.empty()) std::cout << "# " << detail << '\n';
  if (result.verdict == HamiltonResult::Verdict::found)
    std::cout << "cycle: " << join(result.cycle) << '\n';
  if (!a.certificate.empty() && result.verdict == HamiltonResult::Verdict::found) {
    std::ofstream f;
    open_out(f, a.certificate, "--certificate");
    write_certificate(f, result, {});
  }
  return verdict == "NON-HAMILTONIAN" ? kNegative : kOk;
}

// sweep ----------------------------------------------------------------------

struct SweepArgs {
  std::size_t n = 1000;
  double alpha = 0.1;
  double epsilon = 0.2;
  std::string c_grid = "0.7,1.0,1.3,1.6";
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  unsigned jobs = 0;
  std::string family = "bipartite";
  std::string rounds = "one-shot";
  std::size_t rotation_cap = 0;
  std::size_t oracle_max_n = 0;
  bool no_bisect = false;
  bool timing = false;
  std::string out;
  std::string plotdata;
  std::string log;
};

int cmd_sweep(const SweepArgs& a) {
  const auto grid = parse_list(a.c_grid, "--c");
  for (double c : grid)
    if (!(c >= 0)) throw UsageError("--c: values must be non-negative");
  if (!std::is_sorted(grid.begin(), grid.end()) ||
      std::adjacent_find(grid.begin(), grid.end()) != grid.end())
    throw UsageError("--c: values must be strictly ascending");
  TrialConfig base;
  base.n = a.n;
  base.alpha = a.alpha;
  base.epsilon = a.epsilon;
  base.family = parse_seed_family(a.family);
  base.rounds = parse_rounds(a.rounds);
  base.engine.rotation_cap = a.rotation_cap;
  base.master_seed = a.seed;
  base.oracle_max_n = a.oracle_max_n;
  base.validate();

  std::ofstream log;
  if (!a.log.empty()) open_out(log, a.log, "--log");
  SweepOptions opts;
  opts.trials_per_point = a.trials;
  opts.jobs = a.jobs;
  opts.bisect = !a.no_bisect;
  opts.on_point = [&](const SweepPoint& pt, std::span<const TrialOutcome> outcomes) {
    if (!log.is_open()) return;
    TrialConfig cfg = base;
    cfg.p = pt.p;
    for (const auto& o : outcomes) log << trial_json(cfg, o, a.timing) << '\n';
  };
  const SweepResult res = sweep(base, grid, opts);

  if (a.out.empty()) {
    write_sweep_csv(std::cout, res);
  } else {
    std::ofstream f;
    open_out(f, a.out, "--out");
    write_sweep_csv(f, res);
  }
  if (!a.plotdata.empty()) {
    std::ofstream f;
    open_out(f, a.plotdata, "--plotdata");
    write_plotdata(f, res);
  }
  return kOk;
}

// certify --------------------------------------------------------------------

struct CertifyArgs {
  GraphSource src;
  std::string mode = "expander";
  std::size_t k = 0;
  double factor = 2.0;
  bool randomized = false;
  std::size_t budget = 2000;
  double eta = 0.25;
  double K = 16.0;
  double epsilon = 0.2;
};

void print_report(const std::string& name, const ExpansionReport& r) {
  std::cout << name << ": " << to_string(r.verdict) << " (sets checked " << r.sets_checked << ")";
  if (!r.note.empty()) std::cout << " # " << r.note;
  std::cout << '\n';
  if (r.verdict == Verdict::falsified) {
    std::cout << "  witness: " << join(r.witness) << '\n';
    if (!r.witness_other.empty()) std::cout << "  other: " << join(r.witness_other) << '\n';
    std::cout << "  boundary: " << r.witness_boundary << '\n';
    if (r.required > 0) std::cout << "  required: " << num(r.required) << '\n';
  }
}

int cmd_certify(const CertifyArgs& a) {
  RngStream rng(a.src.seed, 1);
  if (a.mode == "expander") {
    const Graph g = a.src.load();
    ExpansionSpec spec;
    spec.k_bound = a.k != 0 ? a.k : std::max<std::size_t>(1, g.vertex_count() / 4);
    spec.factor = a.factor;
    spec.sample_budget = a.budget;
    spec.mode = a.randomized ? ExpansionSpec::Mode::randomized : ExpansionSpec::Mode::exact;
    const ExpansionReport r = a.randomized ? falsify_expander_randomized(g, spec, rng)
                                           : check_expander_exact(g, spec);
    std::cout << "k = " << spec.k_bound << ", factor = " << num(spec.factor) << '\n';
    print_report("expansion", r);
    return r.verdict == Verdict::falsified ? kNegative : kOk;
  }
  if (a.mode == "e123") {
    const Graph r = a.src.load();
    const E123Params params = make_e123_params(r.vertex_count(), a.src.alpha, a.eta, a.K);
    const E123Report rep = check_e1_e2_e3(r, params, rng, a.budget);
    std::cout << "lambda = " << num(params.lambda) << ", d = " << params.d
              << ", d/log n = " << num(rep.degree_log_ratio) << '\n';
    std::cout << "E1 band [" << params.e1_lo << ", " << params.e1_hi << "], E2 band ["
              << params.e2_lo << ", " << params.e2_hi << "], E3 size " << params.e3_size << '\n';
    print_report("E1", rep.e1);
    print_report("E2", rep.e2);
    print_report("E3", rep.e3);
    print_report("E3 strong (diagnostic)", rep.e3_strong);
    const bool bad = rep.e1.verdict == Verdict::falsified || rep.e2.verdict == Verdict::falsified ||
                     rep.e3.verdict == Verdict::falsified;
    return bad ? kNegative : kOk;
  }
  // h1: G_alpha from --family, R1 from --p / --lambda or lambda1 = (1 + epsilon/2) L.
  if (!a.src.path.empty()) throw UsageError("--mode h1 generates its graphs; --graph not allowed");
  if (a.src.n == 0) throw UsageError("--mode h1 needs --n");
  if (a.src.family == "none") throw UsageError("--mode h1 needs --family bipartite or clique-blobs");
  const std::size_t n = a.src.n;
  const Graph g_alpha = a.src.seed_graph();
  double q = a.src.probability();
  if (a.src.p < 0 && a.src.lambda < 0)
    q = make_plan(n, a.src.alpha, a.epsilon).lambda1 / static_cast<double>(n);
  RngStream r1_rng(a.src.seed, 0);
  Graph r1(n);
  add_edges(r1, sample_gnp_edges(n, q, r1_rng));
  const std::size_t d = ceil_alpha_n(a.src.alpha, n);
  const H1Report rep = h1_claim_check(g_alpha, r1, d, rng, a.budget);
  std::cout << "d = " << d << ", small-set bound = " << rep.small_bound << '\n';
  print_report("small sets", rep.small_sets);
  print_report("large sets", rep.large_sets);
  std::cout << "connected: " << (rep.connected ? "yes" : "no") << '\n';
  return rep.passed() ? kOk : kNegative;
}

// obstruct -------------------------------------------------------------------

struct ObstructArgs {
  std::size_t n = 1000;
  double alpha = 0.1;
  std::string eta = "0.1";
  std::size_t trials = 200;
  std::uint64_t seed = 0;
  unsigned jobs = 0;
  std::string per_trial;
};

int cmd_obstruct(const ObstructArgs& a) {
  const auto etas = parse_list(a.eta, "--eta");
  for (double e : etas)
    if (!(e <= 1.0)) throw UsageError("--eta: values must be at most 1");
  std::ofstream per;
  if (!a.per_trial.empty()) {
    open_out(per, a.per_trial, "--per-trial");
    per << "eta,trial,Y\n";
  }
  std::cout << "eta\tp\tA\tEY\tmean_Y\tvar_Y\tcertified_rate\n";
  for (double eta : etas) {
    const ObstructionRow row = obstruction_row(a.n, a.alpha, eta, a.trials, a.seed, a.jobs);
    std::cout << num(row.eta) << '\t' << num(row.p) << '\t' << row.small_side << '\t'
              << num(row.expected_y) << '\t' << num(row.mean_y) << '\t' << num(row.var_y) << '\t'
              << num(row.certified_rate) << '\n';
    if (per.is_open())
      for (std::size_t t = 0; t < row.y.size(); ++t)
        per << num(eta) << ',' << t << ',' << row.y[t] << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hamiltonicity experiments on randomly perturbed graphs"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");
  // Config entries precede explicit flags, so the last occurrence wins.
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  auto add_config = [](CLI::App* cmd) {
    // Consumed by expand_config before parsing; registered for --help.
    static std::string unused;
    cmd->add_option("--config", unused, "File of key = value defaults ('#' comments); flags override");
  };
  auto jobs_help = "Worker threads (default: available parallelism); results do not depend on it";

  SampleArgs sample;
  auto* sample_cmd = app.add_subcommand("sample", "Sample a (perturbed) random graph as an edge list");
  sample.src.add_to(sample_cmd);
  sample_cmd->add_option("--out", sample.out, "Output file (default stdout)");
  add_config(sample_cmd);

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Search for a Hamilton cycle");
  solve.src.add_to(solve_cmd);
  solve_cmd->add_flag("--exact", solve.exact, "Use the exact subset DP (n <= 20)");
  solve_cmd->add_option("--certificate", solve.certificate, "Write the cycle certificate here");
  solve_cmd->add_option("--rotation-cap", solve.rotation_cap, "Rotations per attempt (0 = 4n)");
  solve_cmd->add_flag("--single-closure", solve.single_closure, "Skip the double-closure layer");
  add_config(solve_cmd);

  SweepArgs sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "Threshold sweep over p = c log(1/alpha) / n");
  sweep_cmd->add_option("--n", sw.n, "Vertex count")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--alpha", sw.alpha, "Seed density")->check(CLI::Range(0.0, 1.0));
  sweep_cmd->add_option("--epsilon", sw.epsilon, "Two-round split parameter")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--c", sw.c_grid, "Ascending comma-separated grid of c values");
  sweep_cmd->add_option("--trials", sw.trials, "Trials per point")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--seed", sw.seed, "Master seed");
  sweep_cmd->add_option("--jobs", sw.jobs, jobs_help);
  sweep_cmd->add_option("--family", sw.family, "Seed graph: bipartite, clique-blobs or none")
      ->check(CLI::IsMember({"none", "bipartite", "clique-blobs"}));
  sweep_cmd->add_option("--rounds", sw.rounds, "one-shot or two-round")
      ->check(CLI::IsMember({"one-shot", "two-round"}));
  sweep_cmd->add_option("--rotation-cap", sw.rotation_cap, "Rotations per attempt (0 = 4n)");
  sweep_cmd->add_option("--oracle-max-n", sw.oracle_max_n, "Exact fallback up to this n (<= 20)")
      ->check(CLI::Range(0, 20));
  sweep_cmd->add_flag("--no-bisect", sw.no_bisect, "Skip bisection");
  sweep_cmd->add_flag("--timing", sw.timing, "Record runtimes in the trial log");
  sweep_cmd->add_option("--out", sw.out, "CSV output file (default stdout)");
  sweep_cmd->add_option("--plotdata", sw.plotdata, "Two-column TSV (c, ham_freq)");
  sweep_cmd->add_option("--log", sw.log, "JSON-lines trial log");
  add_config(sweep_cmd);

  CertifyArgs cert;
  auto* cert_cmd = app.add_subcommand("certify", "Expansion checks");
  cert.src.add_to(cert_cmd);
  cert_cmd->add_option("--mode", cert.mode, "expander, e123 or h1")
      ->check(CLI::IsMember({"expander", "e123", "h1"}));
  cert_cmd->add_option("--k", cert.k, "Largest set size for expander mode (default n/4)");
  cert_cmd->add_option("--factor", cert.factor, "Expansion factor")->check(CLI::PositiveNumber);
  cert_cmd->add_flag("--randomized", cert.randomized, "Expander mode: randomized falsifier");
  cert_cmd->add_option("--budget", cert.budget, "Uniform samples per randomized check");
  cert_cmd->add_option("--eta", cert.eta, "e123: lambda = (1 + eta) log(1/alpha)")
      ->check(CLI::PositiveNumber);
  cert_cmd->add_option("--K", cert.K, "e123: band constant")->check(CLI::PositiveNumber);
  cert_cmd->add_option("--epsilon", cert.epsilon, "h1: R1 ~ G(n, (1 + epsilon/2) L / n)")
      ->check(CLI::PositiveNumber);
  add_config(cert_cmd);

  ObstructArgs obs;
  auto* obs_cmd = app.add_subcommand("obstruct", "Isolated-in-B statistics at p = (1 - eta) L / n");
  obs_cmd->add_option("--n", obs.n, "Vertex count")->check(CLI::PositiveNumber);
  obs_cmd->add_option("--alpha", obs.alpha, "Seed density")->check(CLI::Range(0.0, 1.0));
  obs_cmd->add_option("--eta", obs.eta, "Comma-separated eta values (<= 1)");
  obs_cmd->add_option("--trials", obs.trials, "Trials per row")->check(CLI::PositiveNumber);
  obs_cmd->add_option("--seed", obs.seed, "Master seed");
  obs_cmd->add_option("--jobs", obs.jobs, jobs_help);
  obs_cmd->add_option("--per-trial", obs.per_trial, "CSV of per-trial Y values");
  add_config(obs_cmd);

  try {
    std::vector<std::string> args = expand_config(argc, argv);
    std::vector<char*> ptrs;
    for (auto& s : args) ptrs.push_back(s.data());
    try {
      app.parse(static_cast<int>(ptrs.size()), ptrs.data());
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e);
      return code == 0 ? kOk : kUsage;
    }
    if (*sample_cmd) return cmd_sample(sample);
    if (*solve_cmd) return cmd_solve(solve);
    if (*sweep_cmd) return cmd_sweep(sw);
    if (*cert_cmd) return cmd_certify(cert);
    if (*obs_cmd) return cmd_obstruct(obs);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kUsage;
}
