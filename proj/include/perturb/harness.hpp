#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "perturb/graph.hpp"
#include "perturb/posa.hpp"

namespace perturb {

enum class SeedFamily { bipartite, clique_blobs, file, none };
enum class Rounds { one_shot, two_round };
/// Who decided the outcome. `none` means undecided.
enum class Provenance { none, engine, oracle, certificate };

std::string_view to_string(SeedFamily f);
std::string_view to_string(Rounds r);
std::string_view to_string(Provenance p);
SeedFamily parse_seed_family(std::string_view s);
Rounds parse_rounds(std::string_view s);

/**
 * One perturbed-graph experiment: seed graph G_alpha plus random edges of
 * total probability p.
 *
 * Random streams: RngStream(master_seed, 8 * trial_index + role) with role 0
 * for the first (or only) random round, 1 for the second round and 2 for the
 * order in which the second round is exposed.
 */
struct TrialConfig {
  std::size_t n = 0;
  double alpha = 0.1;
  double epsilon = 0.2;  // two-round split only
  double p = 0.0;
  SeedFamily family = SeedFamily::bipartite;
  Rounds rounds = Rounds::one_shot;
  EngineOptions engine;
  std::uint64_t master_seed = 0;
  std::uint64_t trial_index = 0;
  /// Seed graph for SeedFamily::file.
  std::shared_ptr<const Graph> seed_graph;
  /// Exact oracle decides when the engine is exhausted and n <= this.
  std::size_t oracle_max_n = 0;

  /// Throws std::invalid_argument on out-of-range parameters.
  void validate() const;
};

struct TrialOutcome {
  std::uint64_t trial_index = 0;
  bool hamiltonian_found = false;
  bool obstruction_certified = false;
  /// Exact oracle proved the union non-Hamiltonian.
  bool exact_non_hamiltonian = false;
  std::optional<std::size_t> Y;  // bipartite family only
  std::size_t small_side = 0;     // |A| for the bipartite family
  std::size_t random_edges = 0;   // sampled random edges, all rounds
  std::size_t edges_exposed = 0;  // random edges the engine saw before its verdict
  double runtime_seconds = 0.0;
  Provenance provenance = Provenance::none;
  std::string reason;
  std::size_t best_path_vertices = 0;
  std::vector<Vertex> cycle;

  bool undecided() const { return provenance == Provenance::none; }
};

TrialOutcome run_trial(const TrialConfig& cfg);

/// Runs every config; `jobs` worker threads (0 = hardware concurrency).
/// Output order matches input order regardless of scheduling.
std::vector<TrialOutcome> run_trials(std::span<const TrialConfig> configs, unsigned jobs);

// Obstruction ------------------------------------------------------------

/// |{v in B : no R-neighbour inside B}|.
std::size_t count_isolated_in_B(const Graph& r, const VertexSet& b);
/// Same count for a graph on |B| vertices given by its edge list.
std::size_t count_isolated(std::size_t vertex_count, std::span<const Edge> edges);
/// |B| (1 - p)^(|B| - 1) with |B| = n - ceil(alpha n).
double expected_isolated_in_B(std::size_t n, double alpha, double p);
/// Y > |A|: the union K_{A,B} u R is then not Hamiltonian.
bool certify_non_hamiltonian(std::size_t small_side, std::size_t y);

struct ObstructionRow {
  double eta = 0;
  double p = 0;
  std::size_t trials = 0;
  std::size_t small_side = 0;
  double mean_y = 0;
  double var_y = 0;  // unbiased sample variance
  double expected_y = 0;
  double certified_rate = 0;
  std::vector<std::size_t> y;  // per trial
};

/// Y statistics at p = (1 - eta) L / n, sampling only R[B].
ObstructionRow obstruction_row(std::size_t n, double alpha, double eta, std::size_t trials,
                               std::uint64_t master_seed, unsigned jobs = 1);

// Sweep ------------------------------------------------------------------

/// Wilson score interval; throws std::invalid_argument for trials == 0 or successes > trials.
std::pair<double, double> wilson_interval(std::size_t successes, std::size_t trials,
                                          double z = 1.96);

struct SweepPoint {
  double c = 0;
  double p = 0;
  std::size_t trials = 0;
  std::size_t successes = 0;
  std::size_t obstructions = 0;
  double ham_lo = 0, ham_hi = 0;
  double obs_lo = 0, obs_hi = 0;
  bool probe = false;
  double ham_freq() const { return trials ? static_cast<double>(successes) / trials : 0.0; }
  double obs_freq() const { return trials ? static_cast<double>(obstructions) / trials : 0.0; }
};

struct SweepOptions {
  std::size_t trials_per_point = 100;
  unsigned jobs = 1;
  bool bisect = true;
  double relative_width = 0.02;
  std::size_t max_probes = 12;
  /// Called with each point's outcomes (sorted by trial index) as it completes.
  std::function<void(const SweepPoint&, std::span<const TrialOutcome>)> on_point;
};

struct SweepResult {
  std::vector<SweepPoint> grid;
  std::vector<SweepPoint> probes;
  std::optional<double> p_half;
  std::optional<double> c_half;
  double reference = 0;  // L / n
  bool monotone = true;
  std::string diagnostic;
};

/// p = c L / n for each c in the ascending grid; trial indices of point k are
/// k * trials + t, probes continue after the grid.
SweepResult sweep(const TrialConfig& base, std::span<const double> c_grid,
                  const SweepOptions& options);

void write_sweep_csv(std::ostream& out, const SweepResult& result);
void write_plotdata(std::ostream& out, const SweepResult& result);

/// FNV-1a over the canonical text of the config, trial index excluded.
std::uint64_t config_hash(const TrialConfig& cfg);
std::string_view version_string();
/// One JSON object, no trailing newline. `runtime_seconds` only when `timing`.
std::string trial_json(const TrialConfig& cfg, const TrialOutcome& outcome, bool timing);

}  // namespace perturb
