#include "perturb/graph.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

namespace perturb {

Graph::Graph(std::size_t n) : n_(n), stride_(words_for(n)) {
  if (n == 0) throw std::invalid_argument("graph must have at least one vertex");
  rows_.assign(n_ * stride_, 0);
}

void Graph::check_pair(Vertex u, Vertex v) const {
  if (u >= n_ || v >= n_)
    throw std::out_of_range("vertex pair (" + std::to_string(u) + ", " + std::to_string(v) +
                            ") outside 0.." + std::to_string(n_ - 1));
  if (u == v) throw std::invalid_argument("self-loop at vertex " + std::to_string(u));
}

bool Graph::add_edge(Vertex u, Vertex v) {
  check_pair(u, v);
  if (has_edge(u, v)) return false;
  rows_[u * stride_ + v / kWordBits] |= Word{1} << (v % kWordBits);
  rows_[v * stride_ + u / kWordBits] |= Word{1} << (u % kWordBits);
  ++m_;
  return true;
}

bool Graph::remove_edge(Vertex u, Vertex v) {
  check_pair(u, v);
  if (!has_edge(u, v)) return false;
  rows_[u * stride_ + v / kWordBits] &= ~(Word{1} << (v % kWordBits));
  rows_[v * stride_ + u / kWordBits] &= ~(Word{1} << (u % kWordBits));
  --m_;
  return true;
}

std::size_t Graph::degree(Vertex v) const {
  std::size_t d = 0;
  for (Word w : row(v)) d += static_cast<std::size_t>(std::popcount(w));
  return d;
}

std::vector<Vertex> Graph::neighbors(Vertex v) const {
  std::vector<Vertex> out;
  for_each_neighbor(v, [&](Vertex u) { out.push_back(u); });
  return out;
}

VertexSet Graph::neighbor_set(Vertex v) const {
  VertexSet s(n_);
  s.or_words(row(v));
  return s;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(m_);
  for (Vertex u = 0; u < n_; ++u)
    for (std::size_t v = next_neighbor(u, u + 1); v < n_; v = next_neighbor(u, v + 1))
      out.push_back({u, static_cast<Vertex>(v)});
  return out;
}

std::vector<Edge> Graph::non_edges() const {
  std::vector<Edge> out;
  for (Vertex u = 0; u < n_; ++u)
    for (Vertex v = u + 1; v < n_; ++v)
      if (!has_edge(u, v)) out.push_back({u, v});
  return out;
}

bool Graph::check_invariants() const {
  std::size_t degree_sum = 0;
  for (Vertex u = 0; u < n_; ++u) {
    if (has_edge(u, u)) return false;
    const auto r = row(u);
    if (n_ % kWordBits != 0 && (r.back() >> (n_ % kWordBits)) != 0) return false;
    bool symmetric = true;
    for_each_neighbor(u, [&](Vertex v) { symmetric = symmetric && has_edge(v, u); });
    if (!symmetric) return false;
    degree_sum += degree(u);
  }
  return degree_sum == 2 * m_;
}

Graph graph_union(const Graph& a, const Graph& b) {
  if (a.vertex_count() != b.vertex_count())
    throw std::invalid_argument("graph_union: vertex counts differ (" +
                                std::to_string(a.vertex_count()) + " vs " +
                                std::to_string(b.vertex_count()) + ")");
  Graph out = a;
  for (const Edge& e : b.edges()) out.add_edge(e);
  return out;
}

std::size_t add_edges(Graph& g, std::span<const Edge> edges) {
  std::size_t added = 0;
  for (const Edge& e : edges) added += g.add_edge(e) ? 1 : 0;
  return added;
}

VertexSet external_neighborhood(const Graph& g, const VertexSet& x) {
  VertexSet out(g.vertex_count());
  x.for_each([&](Vertex v) { out.or_words(g.row(v)); });
  out -= x;
  return out;
}

std::size_t external_neighborhood_size(const Graph& g, const VertexSet& x) {
  return external_neighborhood(g, x).count();
}

std::size_t min_degree(const Graph& g) {
  std::size_t best = g.vertex_count();
  for (Vertex v = 0; v < g.vertex_count(); ++v) best = std::min(best, g.degree(v));
  return best;
}

std::size_t max_degree(const Graph& g) {
  std::size_t best = 0;
  for (Vertex v = 0; v < g.vertex_count(); ++v) best = std::max(best, g.degree(v));
  return best;
}

std::vector<std::size_t> component_labels(const Graph& g) {
  const std::size_t n = g.vertex_count();
  constexpr auto unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> label(n, unset);
  // Frontier expansion over rows; `unseen` shrinks monotonically.
  VertexSet unseen = VertexSet::full(n);
  std::vector<Vertex> stack;
  std::size_t next_label = 0;
  for (Vertex s = 0; s < n; ++s) {
    if (label[s] != unset) continue;
    label[s] = next_label;
    unseen.erase(s);
    stack.push_back(s);
    while (!stack.empty()) {
      const Vertex v = stack.back();
      stack.pop_back();
      const auto r = g.row(v);
      auto words = unseen.words();
      for (std::size_t w = 0; w < words.size(); ++w) {
        Word fresh = words[w] & r[w];
        if (fresh == 0) continue;
        words[w] &= ~fresh;
        while (fresh != 0) {
          const auto u = static_cast<Vertex>(w * kWordBits + std::countr_zero(fresh));
          label[u] = next_label;
          stack.push_back(u);
          fresh &= fresh - 1;
        }
      }
    }
    ++next_label;
  }
  return label;
}

std::vector<std::vector<Vertex>> components(const Graph& g) {
  const auto label = component_labels(g);
  std::vector<std::vector<Vertex>> out;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (label[v] >= out.size()) out.resize(label[v] + 1);
    out[label[v]].push_back(v);
  }
  return out;
}

bool is_connected(const Graph& g) {
  for (std::size_t l : component_labels(g))
    if (l != 0) return false;
  return true;
}

Graph path_graph(std::size_t n) {
  Graph g(n);
  for (Vertex v = 0; v + 1 < n; ++v) g.add_edge(v, v + 1);
  return g;
}

Graph cycle_graph(std::size_t n) {
  if (n < 3) throw std::invalid_argument("cycle_graph needs n >= 3");
  Graph g = path_graph(n);
  g.add_edge(static_cast<Vertex>(n - 1), 0);
  return g;
}

Graph complete_graph(std::size_t n) {
  Graph g(n);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

Graph star_graph(std::size_t leaves) {
  Graph g(leaves + 1);
  for (Vertex v = 1; v <= leaves; ++v) g.add_edge(0, v);
  return g;
}

Graph petersen_graph() {
  Graph g(10);
  for (Vertex i = 0; i < 5; ++i) {
    g.add_edge(i, (i + 1) % 5);          // outer cycle
    g.add_edge(i, i + 5);                // spokes
    g.add_edge(i + 5, (i + 2) % 5 + 5);  // inner pentagram
  }
  return g;
}

}  // namespace perturb
