#pragma once

// Independent reference implementations for tests. These deliberately avoid
// the library's algorithms: plain adjacency matrices, permutations and
// exhaustive recursion.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include "perturb/graph.hpp"

namespace testing_support {

using perturb::Edge;
using perturb::Graph;
using perturb::Vertex;

using Matrix = std::vector<std::vector<bool>>;

inline Matrix to_matrix(const Graph& g) {
  const std::size_t n = g.vertex_count();
  Matrix m(n, std::vector<bool>(n, false));
  for (const Edge& e : g.edges()) m[e.u][e.v] = m[e.v][e.u] = true;
  return m;
}

/// Erdos-Renyi graph from std::mt19937_64, independent of the library sampler.
inline Graph random_graph(std::size_t n, double p, std::mt19937_64& gen) {
  std::bernoulli_distribution coin(p);
  Graph g(n);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (coin(gen)) g.add_edge(u, v);
  return g;
}

/// Hamiltonicity by trying every cyclic order that starts at vertex 0.
inline bool ham_by_permutations(const Graph& g) {
  const std::size_t n = g.vertex_count();
  if (n < 3) return false;
  const Matrix m = to_matrix(g);
  std::vector<Vertex> rest(n - 1);
  std::iota(rest.begin(), rest.end(), Vertex{1});
  do {
    bool ok = m[0][rest.front()] && m[rest.back()][0];
    for (std::size_t i = 0; ok && i + 1 < rest.size(); ++i) ok = m[rest[i]][rest[i + 1]];
    if (ok) return true;
  } while (std::next_permutation(rest.begin(), rest.end()));
  return false;
}

/// Number of edges in a longest path, by exhaustive DFS from every vertex.
inline std::size_t longest_path_dfs(const Graph& g) {
  const std::size_t n = g.vertex_count();
  const Matrix m = to_matrix(g);
  std::vector<bool> used(n, false);
  std::size_t best = 0;
  std::function<void(Vertex, std::size_t)> go = [&](Vertex v, std::size_t len) {
    best = std::max(best, len);
    for (Vertex u = 0; u < n; ++u)
      if (m[v][u] && !used[u]) {
        used[u] = true;
        go(u, len + 1);
        used[u] = false;
      }
  };
  for (Vertex s = 0; s < n; ++s) {
    used[s] = true;
    go(s, 0);
    used[s] = false;
  }
  return best;
}

/// |N(X) \ X| by definition.
inline std::size_t boundary_by_definition(const Graph& g, const std::vector<Vertex>& x) {
  const Matrix m = to_matrix(g);
  std::vector<bool> in(g.vertex_count(), false);
  for (Vertex v : x) in[v] = true;
  std::size_t count = 0;
  for (Vertex u = 0; u < g.vertex_count(); ++u) {
    if (in[u]) continue;
    for (Vertex v : x)
      if (m[u][v]) {
        ++count;
        break;
      }
  }
  return count;
}

/// Largest k with |N(X) \ X| >= factor |X| for all 1 <= |X| <= k, over all bitmasks.
inline std::size_t expansion_parameter_by_masks(const Graph& g, double factor = 2.0) {
  const std::size_t n = g.vertex_count();
  std::size_t smallest_bad = n + 1;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<Vertex> x;
    for (Vertex v = 0; v < n; ++v)
      if (mask >> v & 1u) x.push_back(v);
    if (x.size() >= smallest_bad) continue;
    if (static_cast<double>(boundary_by_definition(g, x)) < factor * static_cast<double>(x.size()))
      smallest_bad = x.size();
  }
  return smallest_bad - 1 > n ? n : smallest_bad - 1;
}

inline bool connected_by_dfs(const Graph& g) {
  const Matrix m = to_matrix(g);
  const std::size_t n = g.vertex_count();
  std::vector<bool> seen(n, false);
  std::vector<Vertex> stack{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    const Vertex v = stack.back();
    stack.pop_back();
    for (Vertex u = 0; u < n; ++u)
      if (m[v][u] && !seen[u]) {
        seen[u] = true;
        ++count;
        stack.push_back(u);
      }
  }
  return count == n;
}

}  // namespace testing_support
