#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "perturb/graph.hpp"
#include "perturb/random.hpp"

namespace perturb {

/// certified: exhaustively or analytically proven. falsified: a witness set
/// violates the condition. not_falsified: sampling found no witness, which is
/// never a proof.
enum class Verdict { certified, falsified, not_falsified };
std::string_view to_string(Verdict v);

/// |N(X) \ X| >= factor |X| for all X with min_size <= |X| <= k_bound.
struct ExpansionSpec {
  enum class Mode { exact, randomized };
  Mode mode = Mode::exact;
  std::size_t k_bound = 0;
  double factor = 2.0;
  std::size_t sample_budget = 2000;
  std::size_t min_size = 1;
};

struct ExpansionReport {
  Verdict verdict = Verdict::not_falsified;
  std::vector<Vertex> witness;        // sorted; empty unless falsified
  std::vector<Vertex> witness_other;  // second set of an E3 witness pair
  std::size_t witness_boundary = 0;   // |N(witness) \ witness|
  double required = 0.0;              // bound the witness failed to beat
  std::size_t sets_checked = 0;
  std::string note;
};

/// Exhaustive check in order of increasing |X|, so a witness has minimum size.
/// Throws std::invalid_argument when the number of subsets exceeds
/// `enumeration_budget` (use the randomized falsifier instead).
ExpansionReport check_expander_exact(const Graph& g, const ExpansionSpec& spec,
                                     std::uint64_t enumeration_budget = 50'000'000);

/// Largest k such that every X with 1 <= |X| <= k has |N(X) \ X| >= factor |X|.
std::size_t exact_expansion_parameter(const Graph& g, double factor = 2.0,
                                      std::uint64_t enumeration_budget = 50'000'000);

/**
 * One-sided Monte Carlo search for a poorly expanding set.
 *
 * Structured candidates come first: lowest-degree prefixes, breadth-first
 * balls around low-degree vertices and greedy growth that keeps the external
 * neighbourhood small, each checked at every size in range. Then
 * `sample_budget` uniform sets over a log-spaced size grid. Never returns
 * certified.
 */
ExpansionReport falsify_expander_randomized(const Graph& g, const ExpansionSpec& spec,
                                            RngStream& rng);

struct E123Params {
  std::size_t n = 0;
  double K = 16.0;
  double lambda = 0.0;
  std::size_t d = 0;
  double eta = 0.0;

  // Size bands, clamped to n/4. A band with lo > hi is empty.
  std::size_t e1_lo = 0, e1_hi = 0;
  std::size_t e2_lo = 0, e2_hi = 0;
  std::size_t e3_size = 0;  // ceil(n/4)
  bool e1_clamped = false;  // K n / (2 lambda) exceeded n/4
};

/// lambda = (1 + eta) log(1/alpha), d = ceil(alpha n). Throws unless K > 0,
/// eta > 0 and K d / lambda <= n / 4.
E123Params make_e123_params(std::size_t n, double alpha, double eta, double K = 16.0);
/// Bands from explicit lambda and d.
E123Params make_e123_params_explicit(std::size_t n, double lambda, std::size_t d, double K,
                                     double eta = 0.0);

struct E123Report {
  ExpansionReport e1;  // |N(X) \ X| > lambda |X| / K on the E1 band
  ExpansionReport e2;  // |N(X) \ X| > n / 2 on the E2 band
  /// An edge between disjoint A, B with |A| = |B| = ceil(n/4): the pair of
  /// lowest-degree quarters, then uniformly sampled pairs.
  ExpansionReport e3;
  /// Diagnostic only: adversarial search for a quarter A with at least
  /// ceil(n/4) vertices outside A u N(A), i.e. some B with no A-B edge at all.
  ExpansionReport e3_strong;
  double degree_log_ratio = 0.0;
};

E123Report check_e1_e2_e3(const Graph& r, const E123Params& params, RngStream& rng,
                          std::size_t budget = 2000);

struct H1Report {
  /// |X| <= floor(d/3): certified by min-degree d, since d - |X| + 1 >= 2|X|.
  ExpansionReport small_sets;
  /// floor(d/3) < |X| <= n/4: randomized falsifier on G_alpha u R1.
  ExpansionReport large_sets;
  bool connected = false;
  std::size_t small_bound = 0;
  /// Sets enumerated by the small-set branch; always 0.
  std::size_t small_sets_enumerated = 0;

  bool passed() const {
    return connected && small_sets.verdict != Verdict::falsified &&
           large_sets.verdict != Verdict::falsified;
  }
};

/// Throws std::invalid_argument if min_degree(g_alpha) < d or the vertex counts differ.
H1Report h1_claim_check(const Graph& g_alpha, const Graph& r1, std::size_t d, RngStream& rng,
                        std::size_t budget = 2000);
/// Same check on a prebuilt union H1 whose seed part has minimum degree >= d.
H1Report h1_claim_check_union(const Graph& h1, std::size_t d, RngStream& rng,
                              std::size_t budget = 2000);

/// H(q) = -q log q - (1 - q) log(1 - q) in nats, H(0) = H(1) = 0.
double binary_entropy(double q);

}  // namespace perturb
