#include "perturb/exact.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace perturb {

namespace {

using Mask = std::uint32_t;

void check_dp_limit(const Graph& g, const OracleLimit& limit) {
  const std::size_t n = g.vertex_count();
  if (n > limit.max_n_dp || n > 31)
    throw std::invalid_argument("exact oracle: n = " + std::to_string(n) + " exceeds max_n_dp = " +
                                std::to_string(limit.max_n_dp));
  const std::uint64_t bytes = (std::uint64_t{1} << n) * n;
  if (bytes > limit.memory_budget_bytes)
    throw std::invalid_argument("exact oracle: 2^n * n = " + std::to_string(bytes) +
                                " bytes exceeds the memory budget");
}

std::vector<Mask> adjacency_masks(const Graph& g) {
  std::vector<Mask> adj(g.vertex_count(), 0);
  for (Vertex v = 0; v < g.vertex_count(); ++v) adj[v] = static_cast<Mask>(g.row(v)[0]);
  return adj;
}

Mask reachable_neighbours(Mask ends, const std::vector<Mask>& adj) {
  Mask ext = 0;
  while (ends != 0) {
    ext |= adj[std::countr_zero(ends)];
    ends &= ends - 1;
  }
  return ext;
}

// ends[mask] = set of v such that some path visiting exactly `mask` ends at v.
// With anchored = true only paths starting at vertex 0 are counted.
std::vector<Mask> path_table(const std::vector<Mask>& adj, bool anchored) {
  const std::size_t n = adj.size();
  std::vector<Mask> ends(std::size_t{1} << n, 0);
  if (anchored) {
    ends[1] = 1;
  } else {
    for (std::size_t v = 0; v < n; ++v) ends[Mask{1} << v] = Mask{1} << v;
  }
  for (Mask mask = 1; mask < ends.size(); ++mask) {
    if (ends[mask] == 0) continue;
    Mask ext = reachable_neighbours(ends[mask], adj) & ~mask;
    while (ext != 0) {
      const Mask bit = ext & (~ext + 1);
      ends[mask | bit] |= bit;
      ext &= ext - 1;
    }
  }
  return ends;
}

std::vector<Vertex> backtrack(const std::vector<Mask>& ends, const std::vector<Mask>& adj, Mask mask,
                              Vertex last) {
  std::vector<Vertex> rev{last};
  while (std::popcount(mask) > 1) {
    mask &= ~(Mask{1} << last);
    const Mask prev = ends[mask] & adj[last];
    last = static_cast<Vertex>(std::countr_zero(prev));
    rev.push_back(last);
  }
  return {rev.rbegin(), rev.rend()};
}

}  // namespace

std::optional<std::vector<Vertex>> hamilton_cycle_exact(const Graph& g, const OracleLimit& limit) {
  check_dp_limit(g, limit);
  const std::size_t n = g.vertex_count();
  if (n < 3) return std::nullopt;
  const auto adj = adjacency_masks(g);
  const auto ends = path_table(adj, true);
  const Mask full = static_cast<Mask>((std::uint64_t{1} << n) - 1);
  const Mask closing = ends[full] & adj[0];
  if (closing == 0) return std::nullopt;
  return backtrack(ends, adj, full, static_cast<Vertex>(std::countr_zero(closing)));
}

bool hamiltonian_exact(const Graph& g, const OracleLimit& limit) {
  return hamilton_cycle_exact(g, limit).has_value();
}

std::vector<Vertex> longest_path_witness(const Graph& g, const OracleLimit& limit) {
  check_dp_limit(g, limit);
  const auto adj = adjacency_masks(g);
  const auto ends = path_table(adj, false);
  Mask best = 1;
  for (Mask mask = 1; mask < ends.size(); ++mask)
    if (ends[mask] != 0 && std::popcount(mask) > std::popcount(best)) best = mask;
  return backtrack(ends, adj, best, static_cast<Vertex>(std::countr_zero(ends[best])));
}

std::size_t longest_path_exact(const Graph& g, const OracleLimit& limit) {
  check_dp_limit(g, limit);
  const auto adj = adjacency_masks(g);
  const auto ends = path_table(adj, false);
  int best = 1;
  for (Mask mask = 1; mask < ends.size(); ++mask)
    if (ends[mask] != 0) best = std::max(best, std::popcount(mask));
  return static_cast<std::size_t>(best - 1);
}

namespace {

bool extend_order(const Graph& g, std::vector<Vertex>& order, std::vector<bool>& used) {
  const std::size_t n = g.vertex_count();
  if (order.size() == n) return g.has_edge(order.back(), order.front());
  for (Vertex v = 0; v < n; ++v) {
    if (used[v] || !g.has_edge(order.back(), v)) continue;
    used[v] = true;
    order.push_back(v);
    if (extend_order(g, order, used)) return true;
    order.pop_back();
    used[v] = false;
  }
  return false;
}

}  // namespace

bool hamiltonian_bruteforce(const Graph& g, const OracleLimit& limit) {
  const std::size_t n = g.vertex_count();
  if (n > limit.max_n_bruteforce)
    throw std::invalid_argument("brute-force oracle: n = " + std::to_string(n) +
                                " exceeds max_n_bruteforce = " +
                                std::to_string(limit.max_n_bruteforce));
  if (n < 3) return false;
  std::vector<Vertex> order{0};
  std::vector<bool> used(n, false);
  used[0] = true;
  return extend_order(g, order, used);
}

}  // namespace perturb
