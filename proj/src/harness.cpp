#include "perturb/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "perturb/exact.hpp"
#include "perturb/generators.hpp"
#include "perturb/random.hpp"

#ifndef PERTURB_VERSION
#define PERTURB_VERSION "0.1.0"
#endif

namespace perturb {

std::string_view to_string(SeedFamily f) {
  switch (f) {
    case SeedFamily::bipartite: return "bipartite";
    case SeedFamily::clique_blobs: return "clique-blobs";
    case SeedFamily::file: return "file";
    case SeedFamily::none: return "none";
  }
  return "unknown";
}

std::string_view to_string(Rounds r) {
  return r == Rounds::one_shot ? "one-shot" : "two-round";
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::none: return "none";
    case Provenance::engine: return "engine";
    case Provenance::oracle: return "oracle";
    case Provenance::certificate: return "certificate";
  }
  return "unknown";
}

SeedFamily parse_seed_family(std::string_view s) {
  if (s == "bipartite") return SeedFamily::bipartite;
  if (s == "clique-blobs") return SeedFamily::clique_blobs;
  if (s == "file") return SeedFamily::file;
  if (s == "none") return SeedFamily::none;
  throw std::invalid_argument("unknown seed family '" + std::string(s) + "'");
}

Rounds parse_rounds(std::string_view s) {
  if (s == "one-shot") return Rounds::one_shot;
  if (s == "two-round") return Rounds::two_round;
  throw std::invalid_argument("unknown rounds mode '" + std::string(s) + "'");
}

void TrialConfig::validate() const {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
  if (family != SeedFamily::none && family != SeedFamily::file && !(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("alpha must lie in (0, 1)");
  if (family == SeedFamily::file) {
    if (!seed_graph) throw std::invalid_argument("file seed family needs a seed graph");
    if (seed_graph->vertex_count() != n)
      throw std::invalid_argument("seed graph has " + std::to_string(seed_graph->vertex_count()) +
                                  " vertices, expected " + std::to_string(n));
  }
  if (rounds == Rounds::two_round && !(epsilon > 0.0))
    throw std::invalid_argument("two-round mode needs epsilon > 0");
}

namespace {

using Clock = std::chrono::steady_clock;

RngStream trial_stream(const TrialConfig& cfg, std::uint64_t role) {
  return RngStream(cfg.master_seed, 8 * cfg.trial_index + role);
}

Graph build_seed(const TrialConfig& cfg, std::optional<VertexSet>& b) {
  switch (cfg.family) {
    case SeedFamily::bipartite: {
      BipartiteSeed s = unbalanced_bipartite(cfg.n, cfg.alpha);
      b = std::move(s.large_side);
      return std::move(s.graph);
    }
    case SeedFamily::clique_blobs: return clique_blobs(cfg.n, cfg.alpha);
    case SeedFamily::file: return *cfg.seed_graph;
    case SeedFamily::none: return Graph(cfg.n);
  }
  throw std::logic_error("unhandled seed family");
}

}  // namespace

TrialOutcome run_trial(const TrialConfig& cfg) {
  cfg.validate();
  const auto start = Clock::now();
  TrialOutcome out;
  out.trial_index = cfg.trial_index;

  std::optional<VertexSet> b;
  Graph base = build_seed(cfg, b);

  std::vector<Edge> round1;
  std::vector<Edge> stream;
  if (cfg.rounds == Rounds::one_shot) {
    RngStream rng = trial_stream(cfg, 0);
    round1 = sample_gnp_edges(cfg.n, cfg.p, rng);
  } else {
    const PerturbationPlan plan = make_plan(cfg.n, cfg.alpha, cfg.epsilon, cfg.p);
    if (!plan.split_feasible) {
      out.reason = "two-round split infeasible: lambda1/n + lambda2/n > p";
      out.runtime_seconds = std::chrono::duration<double>(Clock::now() - start).count();
      return out;
    }
    RngStream r1 = trial_stream(cfg, 0);
    RngStream r2 = trial_stream(cfg, 1);
    RngStream order = trial_stream(cfg, 2);
    round1 = sample_gnp_edges(cfg.n, plan.lambda1 / static_cast<double>(cfg.n), r1);
    stream = sample_gnp_edges(cfg.n, plan.second_round_probability(), r2);
    shuffle_edges(stream, order);
  }
  out.random_edges = round1.size() + stream.size();

  if (b) {
    // Y is a property of the final union, so it counts both rounds.
    std::vector<std::size_t> inside(cfg.n, 0);
    auto tally = [&](const Edge& e) {
      if (b->contains(e.u) && b->contains(e.v)) {
        ++inside[e.u];
        ++inside[e.v];
      }
    };
    for (const Edge& e : round1) tally(e);
    for (const Edge& e : stream) tally(e);
    std::size_t y = 0;
    b->for_each([&](Vertex v) { y += inside[v] == 0 ? 1 : 0; });
    out.Y = y;
    out.small_side = cfg.n - b->count();
    out.obstruction_certified = certify_non_hamiltonian(out.small_side, y);
    if (out.obstruction_certified) out.provenance = Provenance::certificate;
  }

  for (const Edge& e : round1) base.add_edge(e);
  if (!out.obstruction_certified) {
    if (!is_connected(base)) {
      out.reason = "disconnected: engine needs a connected graph";
    } else if (cfg.n < 3) {
      out.reason = "fewer than 3 vertices";
    } else {
      const HamiltonResult r = sprinkle(base, stream, cfg.engine);
      out.best_path_vertices = r.best_path_vertices;
      out.edges_exposed = round1.size() + r.edges_consumed;
      if (r.verdict == HamiltonResult::Verdict::found) {
        Graph final_graph = base;
        for (std::size_t i = 0; i < r.edges_consumed; ++i) final_graph.add_edge(stream[i]);
        if (!verify_hamilton_cycle(final_graph, r.cycle))
          throw std::logic_error("engine returned an invalid Hamilton cycle");
        out.hamiltonian_found = true;
        out.provenance = Provenance::engine;
        out.cycle = r.cycle;
      } else if (cfg.n <= cfg.oracle_max_n) {
        Graph final_graph = base;
        for (const Edge& e : stream) final_graph.add_edge(e);
        OracleLimit limit;
        limit.max_n_dp = std::max(limit.max_n_dp, cfg.oracle_max_n);
        if (auto cycle = hamilton_cycle_exact(final_graph, limit)) {
          out.hamiltonian_found = true;
          out.cycle = std::move(*cycle);
        } else {
          out.exact_non_hamiltonian = true;
        }
        out.provenance = Provenance::oracle;
        out.edges_exposed = out.random_edges;
      } else {
        out.reason = "engine exhausted";
      }
    }
  }
  if (out.hamiltonian_found && out.obstruction_certified)
    throw std::logic_error("trial is both Hamiltonian and certified non-Hamiltonian");
  out.runtime_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return out;
}

std::vector<TrialOutcome> run_trials(std::span<const TrialConfig> configs, unsigned jobs) {
  std::vector<TrialOutcome> results(configs.size());
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, configs.size()));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < configs.size(); ++i) results[i] = run_trial(configs[i]);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= configs.size()) return;
      try {
        results[i] = run_trial(configs[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = configs.size();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

// ---------------------------------------------------------------------------

std::size_t count_isolated_in_B(const Graph& r, const VertexSet& b) {
  if (b.universe() != r.vertex_count())
    throw std::invalid_argument("count_isolated_in_B: universe mismatch");
  std::size_t y = 0;
  b.for_each([&](Vertex v) { y += b.intersects(r.row(v)) ? 0 : 1; });
  return y;
}

std::size_t count_isolated(std::size_t vertex_count, std::span<const Edge> edges) {
  std::vector<bool> touched(vertex_count, false);
  for (const Edge& e : edges) {
    touched.at(e.u) = true;
    touched.at(e.v) = true;
  }
  return static_cast<std::size_t>(std::count(touched.begin(), touched.end(), false));
}

double expected_isolated_in_B(std::size_t n, double alpha, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
  const std::size_t a = ceil_alpha_n(alpha, n);
  if (a >= n) throw std::invalid_argument("B is empty");
  const double b = static_cast<double>(n - a);
  if (p == 1.0) return b == 1.0 ? 1.0 : 0.0;
  return b * std::exp((b - 1.0) * std::log1p(-p));
}

bool certify_non_hamiltonian(std::size_t small_side, std::size_t y) { return y > small_side; }

ObstructionRow obstruction_row(std::size_t n, double alpha, double eta, std::size_t trials,
                               std::uint64_t master_seed, unsigned jobs) {
  if (trials == 0) throw std::invalid_argument("obstruction_row: trials must be positive");
  if (!(eta <= 1.0)) throw std::invalid_argument("eta must be at most 1");
  ObstructionRow row;
  row.eta = eta;
  row.small_side = ceil_alpha_n(alpha, n);
  if (row.small_side >= n) throw std::invalid_argument("B is empty");
  const std::size_t nb = n - row.small_side;
  row.p = (1.0 - eta) * std::log(1.0 / alpha) / static_cast<double>(n);
  if (row.p > 1.0) throw std::invalid_argument("p = (1 - eta) L / n exceeds 1");
  row.trials = trials;
  row.expected_y = expected_isolated_in_B(n, alpha, row.p);
  row.y.assign(trials, 0);

  auto one = [&](std::size_t t) {
    RngStream rng(master_seed, 8 * t);
    const auto edges = sample_gnp_edges(nb, row.p, rng);
    row.y[t] = count_isolated(nb, edges);
  };
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next.fetch_add(1); t < trials; t = next.fetch_add(1)) one(t);
  };
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < std::min<std::size_t>(jobs, trials); ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  double sum = 0;
  std::size_t certified = 0;
  for (std::size_t y : row.y) {
    sum += static_cast<double>(y);
    certified += certify_non_hamiltonian(row.small_side, y) ? 1 : 0;
  }
  row.mean_y = sum / static_cast<double>(trials);
  double ss = 0;
  for (std::size_t y : row.y) ss += (static_cast<double>(y) - row.mean_y) * (static_cast<double>(y) - row.mean_y);
  row.var_y = trials > 1 ? ss / static_cast<double>(trials - 1) : 0.0;
  row.certified_rate = static_cast<double>(certified) / static_cast<double>(trials);
  return row;
}

// ---------------------------------------------------------------------------

std::pair<double, double> wilson_interval(std::size_t successes, std::size_t trials, double z) {
  if (trials == 0) throw std::invalid_argument("wilson_interval: trials must be positive");
  if (successes > trials) throw std::invalid_argument("wilson_interval: successes > trials");
  const double nn = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (phat + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn)) / denom;
  double lo = std::max(0.0, center - half);
  double hi = std::min(1.0, center + half);
  if (successes == 0) lo = 0.0;
  if (successes == trials) hi = 1.0;
  return {lo, hi};
}

namespace {

SweepPoint run_point(const TrialConfig& base, double c, std::uint64_t first_index,
                     const SweepOptions& options, double reference) {
  SweepPoint pt;
  pt.c = c;
  pt.p = c * reference;
  if (pt.p > 1.0) throw std::invalid_argument("sweep: p = c L / n exceeds 1 at c = " + std::to_string(c));
  std::vector<TrialConfig> configs(options.trials_per_point, base);
  for (std::size_t t = 0; t < configs.size(); ++t) {
    configs[t].p = pt.p;
    configs[t].trial_index = first_index + t;
  }
  const auto outcomes = run_trials(configs, options.jobs);
  pt.trials = outcomes.size();
  for (const auto& o : outcomes) {
    pt.successes += o.hamiltonian_found ? 1 : 0;
    pt.obstructions += o.obstruction_certified ? 1 : 0;
  }
  std::tie(pt.ham_lo, pt.ham_hi) = wilson_interval(pt.successes, pt.trials);
  std::tie(pt.obs_lo, pt.obs_hi) = wilson_interval(pt.obstructions, pt.trials);
  if (options.on_point) options.on_point(pt, outcomes);
  return pt;
}

}  // namespace

SweepResult sweep(const TrialConfig& base, std::span<const double> c_grid,
                  const SweepOptions& options) {
  if (c_grid.empty()) throw std::invalid_argument("sweep: empty grid");
  if (!std::is_sorted(c_grid.begin(), c_grid.end()))
    throw std::invalid_argument("sweep: grid must be sorted ascending");
  if (options.trials_per_point == 0) throw std::invalid_argument("sweep: trials must be positive");
  if (!(base.alpha > 0.0 && base.alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  SweepResult res;
  res.reference = std::log(1.0 / base.alpha) / static_cast<double>(base.n);
  const std::uint64_t t = options.trials_per_point;
  std::uint64_t block = 0;
  for (double c : c_grid) res.grid.push_back(run_point(base, c, block++ * t, options, res.reference));

  for (std::size_t i = 0; i < res.grid.size(); ++i)
    for (std::size_t j = i + 1; j < res.grid.size(); ++j)
      if (res.grid[j].ham_hi < res.grid[i].ham_lo) res.monotone = false;

  std::size_t first_up = res.grid.size();
  for (std::size_t i = 0; i < res.grid.size(); ++i)
    if (res.grid[i].ham_freq() >= 0.5) {
      first_up = i;
      break;
    }
  if (first_up == res.grid.size()) {
    res.diagnostic = "degenerate grid: success frequency below 1/2 at every point";
    return res;
  }
  if (first_up == 0) {
    res.diagnostic = "degenerate grid: success frequency at least 1/2 at every point";
    return res;
  }
  double lo = res.grid[first_up - 1].c;
  double hi = res.grid[first_up].c;
  if (options.bisect) {
    for (std::size_t k = 0; k < options.max_probes; ++k) {
      if (hi - lo <= options.relative_width * hi) break;
      const double mid = 0.5 * (lo + hi);
      SweepPoint pt = run_point(base, mid, block++ * t, options, res.reference);
      pt.probe = true;
      (pt.ham_freq() >= 0.5 ? hi : lo) = mid;
      res.probes.push_back(pt);
    }
  }
  res.c_half = 0.5 * (lo + hi);
  res.p_half = *res.c_half * res.reference;
  return res;
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void write_row(std::ostream& out, const SweepPoint& pt) {
  out << fmt(pt.c) << ',' << fmt(pt.p) << ',' << pt.trials << ',' << fmt(pt.ham_freq()) << ','
      << fmt(pt.ham_lo) << ',' << fmt(pt.ham_hi) << ',' << fmt(pt.obs_freq()) << ','
      << fmt(pt.obs_lo) << ',' << fmt(pt.obs_hi) << '\n';
}

}  // namespace

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << "c,p,trials,ham_freq,ham_lo,ham_hi,obs_freq,obs_lo,obs_hi\n";
  for (const auto& pt : result.grid) write_row(out, pt);
  for (const auto& pt : result.probes) {
    out << "# probe ";
    write_row(out, pt);
  }
  if (!result.monotone) out << "# warning: success frequency decreases beyond CI overlap\n";
  if (!result.diagnostic.empty()) out << "# " << result.diagnostic << '\n';
  out << "# p_half=" << (result.p_half ? fmt(*result.p_half) : "none")
      << " c_half=" << (result.c_half ? fmt(*result.c_half) : "none") << '\n';
}

void write_plotdata(std::ostream& out, const SweepResult& result) {
  std::vector<SweepPoint> all = result.grid;
  all.insert(all.end(), result.probes.begin(), result.probes.end());
  std::stable_sort(all.begin(), all.end(),
                   [](const SweepPoint& a, const SweepPoint& b) { return a.c < b.c; });
  for (const auto& pt : all) out << fmt(pt.c) << '\t' << fmt(pt.ham_freq()) << '\n';
}

std::uint64_t config_hash(const TrialConfig& cfg) {
  std::string text = "n=" + std::to_string(cfg.n) + ";alpha=" + fmt(cfg.alpha) +
                     ";epsilon=" + fmt(cfg.epsilon) + ";p=" + fmt(cfg.p) +
                     ";family=" + std::string(to_string(cfg.family)) +
                     ";rounds=" + std::string(to_string(cfg.rounds)) +
                     ";rotation_cap=" + std::to_string(cfg.engine.rotation_cap) +
                     ";double_closure=" + std::to_string(cfg.engine.double_closure) +
                     ";seed=" + std::to_string(cfg.master_seed) +
                     ";oracle_max_n=" + std::to_string(cfg.oracle_max_n);
  if (cfg.seed_graph) text += ";seed_edges=" + std::to_string(cfg.seed_graph->edge_count());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string_view version_string() { return PERTURB_VERSION; }

std::string trial_json(const TrialConfig& cfg, const TrialOutcome& o, bool timing) {
  nlohmann::ordered_json j;
  j["trial_index"] = o.trial_index;
  j["n"] = cfg.n;
  j["alpha"] = cfg.alpha;
  j["p"] = cfg.p;
  j["family"] = to_string(cfg.family);
  j["rounds"] = to_string(cfg.rounds);
  j["hamiltonian_found"] = o.hamiltonian_found;
  j["obstruction_certified"] = o.obstruction_certified;
  j["exact_non_hamiltonian"] = o.exact_non_hamiltonian;
  j["Y"] = o.Y ? nlohmann::ordered_json(*o.Y) : nlohmann::ordered_json(nullptr);
  j["small_side"] = o.small_side;
  j["random_edges"] = o.random_edges;
  j["edges_exposed"] = o.edges_exposed;
  j["provenance"] = to_string(o.provenance);
  j["reason"] = o.reason;
  j["best_path_vertices"] = o.best_path_vertices;
  if (timing) j["runtime_seconds"] = o.runtime_seconds;
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config_hash(cfg)));
  j["cfg_hash"] = hash;
  j["version"] = version_string();
  return j.dump();
}

}  // namespace perturb
