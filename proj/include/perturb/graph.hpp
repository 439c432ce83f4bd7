#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "perturb/vertex_set.hpp"

namespace perturb {

struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  /// Same pair with u < v.
  Edge normalized() const { return u < v ? Edge{u, v} : Edge{v, u}; }
  friend bool operator==(const Edge&, const Edge&) = default;
};

/**
 * Undirected simple graph on vertices 0..n-1 stored as a dense bit matrix.
 *
 * Row v holds the neighbours of v. All set-neighbourhood queries are word-wise
 * OR / AND-NOT over rows. Graphs are built by a single owner and then only
 * read; nothing here is synchronized.
 */
class Graph {
 public:
  /// Throws std::invalid_argument for n == 0.
  explicit Graph(std::size_t n);

  std::size_t vertex_count() const { return n_; }
  std::size_t edge_count() const { return m_; }
  std::size_t words_per_row() const { return stride_; }

  /// Adds {u, v}; returns false when the edge was already present.
  bool add_edge(Vertex u, Vertex v);
  bool add_edge(Edge e) { return add_edge(e.u, e.v); }
  /// Removes {u, v}; returns false when it was absent.
  bool remove_edge(Vertex u, Vertex v);

  bool has_edge(Vertex u, Vertex v) const {
    return (rows_[u * stride_ + v / kWordBits] >> (v % kWordBits)) & 1U;
  }

  std::span<const Word> row(Vertex v) const { return {rows_.data() + v * stride_, stride_}; }

  std::size_t degree(Vertex v) const;
  std::vector<Vertex> neighbors(Vertex v) const;
  VertexSet neighbor_set(Vertex v) const;

  /// First neighbour of v with index >= from, or vertex_count().
  std::size_t next_neighbor(Vertex v, std::size_t from) const {
    return find_next_bit(row(v), from, n_);
  }

  template <typename F>
  void for_each_neighbor(Vertex v, F&& f) const {
    const Word* r = rows_.data() + v * stride_;
    for (std::size_t w = 0; w < stride_; ++w) {
      Word bits = r[w];
      while (bits != 0) {
        f(static_cast<Vertex>(w * kWordBits + static_cast<std::size_t>(std::countr_zero(bits))));
        bits &= bits - 1;
      }
    }
  }

  /// Edges with u < v in lexicographic order.
  std::vector<Edge> edges() const;
  /// Non-adjacent pairs with u < v in lexicographic order.
  std::vector<Edge> non_edges() const;

  /// Checks symmetry, loop-freeness and the cached edge count. Linear in n^2/64.
  bool check_invariants() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  void check_pair(Vertex u, Vertex v) const;

  std::size_t n_ = 0;
  std::size_t stride_ = 0;
  std::size_t m_ = 0;
  std::vector<Word> rows_;
};

/// Edge-set union of two graphs on the same vertex set.
Graph graph_union(const Graph& a, const Graph& b);

/// Adds every pair of `edges` to g; returns the number of pairs that were new.
std::size_t add_edges(Graph& g, std::span<const Edge> edges);

/// N_G(X) \ X.
VertexSet external_neighborhood(const Graph& g, const VertexSet& x);
std::size_t external_neighborhood_size(const Graph& g, const VertexSet& x);

std::size_t min_degree(const Graph& g);
std::size_t max_degree(const Graph& g);

/// Component label per vertex, labels 0..k-1 in order of lowest member.
std::vector<std::size_t> component_labels(const Graph& g);
std::vector<std::vector<Vertex>> components(const Graph& g);
bool is_connected(const Graph& g);

// Small named graphs, used by tests and the CLI examples.
Graph path_graph(std::size_t n);
Graph cycle_graph(std::size_t n);
Graph complete_graph(std::size_t n);
Graph star_graph(std::size_t leaves);
Graph petersen_graph();

}  // namespace perturb
