#include "perturb/generators.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace perturb {

namespace {

std::uint64_t row_start(std::uint64_t u, std::uint64_t n) { return u * (2 * n - u - 1) / 2; }

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("alpha must lie in (0, 1), got " + std::to_string(alpha));
}

}  // namespace

std::size_t ceil_alpha_n(double alpha, std::size_t n) {
  const double x = alpha * static_cast<double>(n);
  const double nearest = std::nearbyint(x);
  if (std::fabs(x - nearest) <= 1e-9 * std::max(1.0, std::fabs(x)))
    return static_cast<std::size_t>(nearest);
  return static_cast<std::size_t>(std::ceil(x));
}

Edge pair_from_index(std::uint64_t index, std::size_t n) {
  if (n < 2 || index >= pair_count(n)) throw std::out_of_range("pair index out of range");
  const auto nn = static_cast<std::uint64_t>(n);
  // Solve row_start(u) <= index for the largest u, then correct rounding.
  const double b = 2.0 * static_cast<double>(nn) - 1.0;
  auto u = static_cast<std::uint64_t>(
      std::floor((b - std::sqrt(b * b - 8.0 * static_cast<double>(index))) / 2.0));
  if (u > nn - 2) u = nn - 2;
  while (u > 0 && row_start(u, nn) > index) --u;
  while (u + 1 <= nn - 2 && row_start(u + 1, nn) <= index) ++u;
  const std::uint64_t v = u + 1 + (index - row_start(u, nn));
  return {static_cast<Vertex>(u), static_cast<Vertex>(v)};
}

std::uint64_t pair_index(Edge e, std::size_t n) {
  const Edge p = e.normalized();
  return row_start(p.u, n) + (p.v - p.u - 1);
}

std::vector<Edge> sample_gnp_edges(std::size_t n, double p, RngStream& rng) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("edge probability must lie in [0, 1], got " + std::to_string(p));
  std::vector<Edge> out;
  const std::uint64_t total = pair_count(n);
  if (p == 0.0 || total == 0) return out;
  out.reserve(static_cast<std::size_t>(static_cast<double>(total) * p * 1.1) + 16);
  if (p == 1.0) {
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = u + 1; v < n; ++v) out.push_back({u, v});
    return out;
  }
  // Walk the linearized index; (u, row_begin) tracks the row containing `k`.
  std::uint64_t k = rng.geometric(p);
  std::uint64_t u = 0;
  std::uint64_t row_begin = 0;
  const auto nn = static_cast<std::uint64_t>(n);
  while (k < total) {
    while (k >= row_begin + (nn - 1 - u)) {
      row_begin += nn - 1 - u;
      ++u;
    }
    out.push_back({static_cast<Vertex>(u), static_cast<Vertex>(u + 1 + (k - row_begin))});
    const std::uint64_t skip = rng.geometric(p);
    if (skip >= total) break;
    k += skip + 1;
  }
  return out;
}

Graph sample_gnp(std::size_t n, double p, RngStream& rng) {
  Graph g(n);
  for (const Edge& e : sample_gnp_edges(n, p, rng)) g.add_edge(e);
  return g;
}

std::vector<Edge> uniform_edge_stream(std::size_t n, std::uint64_t m, RngStream& rng) {
  const std::uint64_t total = pair_count(n);
  if (m > total)
    throw std::invalid_argument("edge budget " + std::to_string(m) + " exceeds C(n,2) = " +
                                std::to_string(total));
  std::vector<Edge> out;
  out.reserve(m);
  if (2 * m > total) {
    // Dense budget: partial Fisher-Yates over all pair indices.
    std::vector<std::uint64_t> idx(total);
    for (std::uint64_t i = 0; i < total; ++i) idx[i] = i;
    for (std::uint64_t i = 0; i < m; ++i) {
      const std::uint64_t j = i + rng.below(total - i);
      std::swap(idx[i], idx[j]);
      out.push_back(pair_from_index(idx[i], n));
    }
    return out;
  }
  // Sparse budget: sequential draws, rejecting repeats.
  std::unordered_set<std::uint64_t> used;
  used.reserve(m * 2);
  while (out.size() < m) {
    const std::uint64_t k = rng.below(total);
    if (used.insert(k).second) out.push_back(pair_from_index(k, n));
  }
  return out;
}

void shuffle_edges(std::vector<Edge>& edges, RngStream& rng) {
  for (std::size_t i = edges.size(); i > 1; --i) {
    const std::size_t j = rng.below(i);
    std::swap(edges[i - 1], edges[j]);
  }
}

void add_complete_bipartite(Graph& g, std::size_t a) {
  const std::size_t n = g.vertex_count();
  for (Vertex u = 0; u < a; ++u)
    for (Vertex v = static_cast<Vertex>(a); v < n; ++v) g.add_edge(u, v);
}

BipartiteSeed unbalanced_bipartite(std::size_t n, double alpha) {
  check_alpha(alpha);
  const std::size_t a = ceil_alpha_n(alpha, n);
  if (a < 1 || a >= n)
    throw std::invalid_argument("degenerate partition: |A| = " + std::to_string(a) +
                                ", n = " + std::to_string(n));
  BipartiteSeed seed{Graph(n), VertexSet(n), VertexSet(n)};
  add_complete_bipartite(seed.graph, a);
  for (Vertex v = 0; v < n; ++v) (v < a ? seed.small_side : seed.large_side).insert(v);
  return seed;
}

Graph clique_blobs(std::size_t n, double alpha) {
  check_alpha(alpha);
  if (n < 2) throw std::invalid_argument("clique_blobs needs n >= 2");
  // A blob larger than n collapses to K_n, whose min degree n - 1 is the best available.
  const std::size_t size = std::min(ceil_alpha_n(alpha, n) + 1, n);
  const std::size_t blobs = n / size;
  Graph g(n);
  for (std::size_t b = 0; b < blobs; ++b) {
    const std::size_t begin = b * size;
    const std::size_t end = (b + 1 == blobs) ? n : begin + size;
    for (std::size_t u = begin; u < end; ++u)
      for (std::size_t v = u + 1; v < end; ++v)
        g.add_edge(static_cast<Vertex>(u), static_cast<Vertex>(v));
  }
  return g;
}

double PerturbationPlan::second_round_probability() const {
  const double q1 = lambda1 / static_cast<double>(n);
  if (q1 >= 1.0) return 0.0;
  return std::max(0.0, 1.0 - (1.0 - p) / (1.0 - q1));
}

double PerturbationPlan::degree_log_ratio() const {
  return static_cast<double>(d) / std::log(static_cast<double>(n));
}

PerturbationPlan make_plan(std::size_t n, double alpha, double epsilon, double p) {
  check_alpha(alpha);
  if (n < 2) throw std::invalid_argument("plan needs n >= 2");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  PerturbationPlan plan;
  plan.n = n;
  plan.alpha = alpha;
  plan.epsilon = epsilon;
  plan.L = std::log(1.0 / alpha);
  plan.d = ceil_alpha_n(alpha, n);
  plan.lambda1 = (1.0 + epsilon / 2.0) * plan.L;
  plan.lambda2 = epsilon * plan.L / 4.0;
  plan.p = p < 0.0 ? plan.p0() : p;
  if (plan.p > 1.0) throw std::invalid_argument("edge probability must lie in [0, 1]");
  const double nd = static_cast<double>(n);
  plan.split_feasible = plan.lambda1 / nd + plan.lambda2 / nd <= plan.p * (1.0 + 1e-12) &&
                        plan.lambda1 / nd < 1.0;
  return plan;
}

}  // namespace perturb
