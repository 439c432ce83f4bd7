#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "perturb/graph.hpp"
#include "perturb/random.hpp"

namespace perturb {

/// ceil(alpha * n), snapping to the nearest integer when alpha * n lies within
/// floating-point noise of it (so 0.1 * 30 gives 3, not 4).
std::size_t ceil_alpha_n(double alpha, std::size_t n);

/// Number of unordered pairs C(n, 2).
inline std::uint64_t pair_count(std::size_t n) {
  return static_cast<std::uint64_t>(n) * (n - 1) / 2;
}

/// Inverse of the lexicographic linearization of pairs (u < v) of 0..n-1.
Edge pair_from_index(std::uint64_t index, std::size_t n);
std::uint64_t pair_index(Edge e, std::size_t n);

/// G(n, p) as an edge list in lexicographic order, by geometric skipping over
/// the linearized pair index. Throws for p outside [0, 1].
std::vector<Edge> sample_gnp_edges(std::size_t n, double p, RngStream& rng);
Graph sample_gnp(std::size_t n, double p, RngStream& rng);

/// Uniformly random ordered sequence of m distinct pairs of K_n.
std::vector<Edge> uniform_edge_stream(std::size_t n, std::uint64_t m, RngStream& rng);

/// Uniform random permutation of `edges` (Fisher-Yates with RngStream::below).
void shuffle_edges(std::vector<Edge>& edges, RngStream& rng);

struct BipartiteSeed {
  Graph graph;
  VertexSet small_side;  // A = {0 .. ceil(alpha n) - 1}
  VertexSet large_side;  // B = the rest
};

/// K_{A,B} with |A| = ceil(alpha n).
BipartiteSeed unbalanced_bipartite(std::size_t n, double alpha);
/// Edge list of K_{A,B} with |A| = a, A = {0..a-1}.
void add_complete_bipartite(Graph& g, std::size_t a);

/// Disjoint cliques of size ceil(alpha n) + 1, capped at n; leftover vertices join the last clique.
Graph clique_blobs(std::size_t n, double alpha);

/**
 * Parameters of one perturbation experiment and the two-round split.
 *
 * The split exposes R1 ~ G(n, lambda1/n) and then a second round; the split
 * is feasible when lambda1/n + lambda2/n <= p.
 */
struct PerturbationPlan {
  std::size_t n = 0;
  double alpha = 0;
  double epsilon = 0;
  double p = 0;
  double L = 0;  // log(1/alpha)
  std::size_t d = 0;  // ceil(alpha n)
  double lambda1 = 0;  // (1 + epsilon/2) L
  double lambda2 = 0;  // epsilon L / 4
  bool split_feasible = false;

  double p0() const { return (1.0 + epsilon) * L / static_cast<double>(n); }
  /// Probability for the second round so that R1 u R2 ~ G(n, p) exactly:
  /// 1 - (1 - p) / (1 - lambda1/n). At least lambda2/n when the split is feasible.
  double second_round_probability() const;
  /// d / log n; the regime indicator recorded with every experiment.
  double degree_log_ratio() const;
};

/// p defaults to p0 = (1 + epsilon) L / n when negative.
PerturbationPlan make_plan(std::size_t n, double alpha, double epsilon, double p = -1.0);

}  // namespace perturb
