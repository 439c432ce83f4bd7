#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "perturb/edge_list.hpp"
#include "perturb/graph.hpp"
#include "perturb/vertex_set.hpp"
#include "support.hpp"

using namespace perturb;

TEST_CASE("vertex set basics") {
  VertexSet s(130, {0, 64, 129});
  CHECK(s.count() == 3);
  CHECK(s.contains(64));
  CHECK_FALSE(s.contains(63));
  CHECK(s.find_next(1) == 64);
  CHECK(s.find_next(130) == 130);
  s.erase(64);
  CHECK(s.to_vector() == std::vector<Vertex>{0, 129});

  const VertexSet c = s.complement();
  CHECK(c.count() == 128);
  CHECK_FALSE(c.contains(129));
  CHECK((c | s) == VertexSet::full(130));
  CHECK((c & s).empty());
  CHECK((VertexSet::full(130) - c) == s);
}

TEST_CASE("new graph") {
  Graph g(3);
  CHECK(g.vertex_count() == 3);
  CHECK(g.edge_count() == 0);
  Graph one(1);
  CHECK(one.vertex_count() == 1);
  CHECK(one.degree(0) == 0);
  CHECK_THROWS_AS(Graph(0), std::invalid_argument);
}

TEST_CASE("add edge") {
  Graph g(3);
  CHECK(g.add_edge(0, 1));
  CHECK_FALSE(g.add_edge(0, 1));
  CHECK_FALSE(g.add_edge(1, 0));
  CHECK(g.edge_count() == 1);
  CHECK(g.has_edge(1, 0));
  CHECK_THROWS_AS(g.add_edge(2, 2), std::invalid_argument);
  CHECK_THROWS_AS(g.add_edge(0, 3), std::out_of_range);
  CHECK(g.remove_edge(0, 1));
  CHECK(g.edge_count() == 0);
}

TEST_CASE("union") {
  const Graph p = path_graph(3);
  CHECK(graph_union(p, Graph(3)) == p);
  CHECK(graph_union(p, p) == p);
  Graph chord(3);
  chord.add_edge(0, 2);
  const Graph t = graph_union(p, chord);
  CHECK(t.edge_count() == 3);
  CHECK(t == complete_graph(3));
  CHECK_THROWS_AS(graph_union(p, Graph(4)), std::invalid_argument);
}

TEST_CASE("external neighborhood") {
  const Graph p = path_graph(3);
  CHECK(external_neighborhood(p, VertexSet(3, {1})).to_vector() == std::vector<Vertex>{0, 2});
  CHECK(external_neighborhood(p, VertexSet::full(3)).empty());
  const Graph k3 = complete_graph(3);
  CHECK(external_neighborhood(k3, VertexSet(3, {0})).to_vector() == std::vector<Vertex>{1, 2});
}

TEST_CASE("connectivity") {
  CHECK(is_connected(path_graph(5)));
  Graph two(4);
  two.add_edge(0, 1);
  two.add_edge(2, 3);
  CHECK_FALSE(is_connected(two));
  CHECK(components(two).size() == 2);
  CHECK(is_connected(Graph(1)));
}

TEST_CASE("min degree") {
  CHECK(min_degree(complete_graph(4)) == 3);
  CHECK(min_degree(star_graph(3)) == 1);
  CHECK(min_degree(Graph(5)) == 0);
  CHECK(max_degree(star_graph(3)) == 3);
}

TEST_CASE("named graphs") {
  const Graph pg = petersen_graph();
  CHECK(pg.edge_count() == 15);
  for (Vertex v = 0; v < 10; ++v) CHECK(pg.degree(v) == 3);
  CHECK(cycle_graph(5).edge_count() == 5);
  CHECK_THROWS(cycle_graph(2));
}

TEST_CASE("property: random construction keeps invariants") {
  std::mt19937_64 gen(11);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = 1 + gen() % 150;
    Graph g(n);
    Graph h(n);
    for (int k = 0; k < 300 && n > 1; ++k) {
      const auto u = static_cast<Vertex>(gen() % n);
      const auto v = static_cast<Vertex>(gen() % n);
      if (u == v) continue;
      (k % 2 ? g : h).add_edge(u, v);
    }
    const Graph gh = graph_union(g, h);
    CHECK(gh.check_invariants());
    CHECK(gh == graph_union(h, g));
    CHECK(gh.edge_count() <= g.edge_count() + h.edge_count());
    Graph k(n);
    CHECK(graph_union(graph_union(g, h), k) == graph_union(g, graph_union(h, k)));

    VertexSet x(n), y(n);
    for (Vertex v = 0; v < n; ++v) {
      if (gen() % 3 == 0) x.insert(v);
      if (gen() % 3 == 0) y.insert(v);
    }
    const VertexSet nx = external_neighborhood(gh, x);
    CHECK_FALSE(nx.intersects(x));
    CHECK(nx.count() == testing_support::boundary_by_definition(gh, x.to_vector()));
    CHECK(external_neighborhood_size(gh, x | y) <=
          external_neighborhood_size(gh, x) + external_neighborhood_size(gh, y));
    CHECK(is_connected(gh) == testing_support::connected_by_dfs(gh));
  }
}

TEST_CASE("edge list round trip") {
  std::mt19937_64 gen(5);
  const Graph g = testing_support::random_graph(40, 0.2, gen);
  std::stringstream ss;
  write_edge_list(ss, g);
  CHECK(read_edge_list(ss) == g);
}

namespace {

std::size_t error_line(const std::string& text) {
  std::istringstream in(text);
  try {
    read_edge_list(in);
  } catch (const EdgeListError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("edge list rejects malformed input with line numbers") {
  CHECK(error_line("") == 1);
  CHECK(error_line("0 0\n") == 1);
  CHECK(error_line("3 2\n0 1\n0 1\n") == 3);  // duplicate
  CHECK(error_line("3 1\n1 1\n") == 2);       // self-loop
  CHECK(error_line("3 1\n0 3\n") == 2);       // out of range
  CHECK(error_line("3 1\n2 1\n") == 2);       // u > v
  CHECK(error_line("3 2\n0 1\n") == 3);       // missing edge
  CHECK(error_line("3 1\n0 1 2\n") == 2);     // extra field
  CHECK(error_line("3 1\n0 1\n1 2\n") == 3);  // trailing data
  CHECK(error_line("3 4\n") == 1);            // more edges than pairs
  CHECK(error_line("3 1\n0 2\n") == 0);
}
