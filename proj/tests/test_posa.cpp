#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "perturb/exact.hpp"
#include "perturb/generators.hpp"
#include "perturb/posa.hpp"
#include "support.hpp"

using namespace perturb;

namespace {

// Every free endpoint reachable by any rotation sequence with order[0] pinned,
// searching over whole path states.
std::set<Vertex> closure_by_states(const Graph& g, const std::vector<Vertex>& start) {
  std::set<std::vector<Vertex>> seen{start};
  std::vector<std::vector<Vertex>> queue{start};
  std::set<Vertex> ends;
  for (std::size_t k = 0; k < queue.size(); ++k) {
    const auto p = queue[k];
    ends.insert(p.back());
    const std::size_t l = p.size() - 1;
    for (std::size_t i = 0; i + 2 <= l; ++i) {
      if (!g.has_edge(p.back(), p[i])) continue;
      auto q = p;
      std::reverse(q.begin() + static_cast<std::ptrdiff_t>(i) + 1, q.end());
      if (seen.insert(q).second) queue.push_back(q);
    }
  }
  return ends;
}

std::set<Vertex> as_set(const VertexSet& s) {
  const auto v = s.to_vector();
  return {v.begin(), v.end()};
}

Graph connected_random(std::size_t n, double p, std::mt19937_64& gen) {
  while (true) {
    Graph g = testing_support::random_graph(n, p, gen);
    if (is_connected(g)) return g;
  }
}

std::vector<Vertex> iota_order(std::size_t n) {
  std::vector<Vertex> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<Vertex>(i);
  return v;
}

}  // namespace

TEST_CASE("path state validation") {
  const Graph g = path_graph(4);
  PathState p(g, {0, 1, 2, 3});
  CHECK(p.length() == 3);
  CHECK(p.head() == 0);
  CHECK(p.tail() == 3);
  CHECK(p.spanning());
  CHECK(p.position(2) == 2);
  CHECK(p.check_invariants());
  CHECK_THROWS_AS(PathState(g, {0, 2}), std::invalid_argument);
  CHECK_THROWS_AS(PathState(g, {0, 1, 0}), std::invalid_argument);
}

TEST_CASE("rotation examples") {
  Graph g = path_graph(4);
  g.add_edge(3, 1);
  PathState p(g, {0, 1, 2, 3});
  p.rotate(1);
  CHECK(std::vector<Vertex>(p.order().begin(), p.order().end()) == std::vector<Vertex>{0, 1, 3, 2});
  CHECK(p.tail() == 2);
  CHECK(p.check_invariants());
  // Mirrored pivot: the old path edge (2, 1) undoes the rotation.
  p.rotate(1);
  CHECK(std::vector<Vertex>(p.order().begin(), p.order().end()) == std::vector<Vertex>{0, 1, 2, 3});
  CHECK_THROWS_AS(p.rotate(2), std::invalid_argument);
  CHECK_THROWS_AS(p.rotate(0), std::invalid_argument);  // not an edge of tail 3
}

TEST_CASE("property: random rotations preserve the path") {
  std::mt19937_64 gen(99);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 6 + gen() % 20;
    Graph g = testing_support::random_graph(n, 0.4, gen);
    for (Vertex v = 0; v + 1 < n; ++v) g.add_edge(v, v + 1);
    PathState p(g, iota_order(n));
    for (int step = 0; step < 30; ++step) {
      std::vector<Vertex> pivots;
      for (std::size_t i = 0; i + 2 < p.vertex_count(); ++i)
        if (g.has_edge(p.tail(), p.order()[i])) pivots.push_back(p.order()[i]);
      if (pivots.empty()) break;
      p.rotate(pivots[gen() % pivots.size()]);
      CHECK(p.vertex_count() == n);
      CHECK(p.head() == 0);
      CHECK(p.check_invariants());
    }
  }
}

TEST_CASE("endpoint closure examples") {
  const Graph c5 = cycle_graph(5);
  const PathState p5(c5, {0, 1, 2, 3, 4});
  CHECK(as_set(endpoint_closure(p5, 0).reachable) == closure_by_states(c5, {0, 1, 2, 3, 4}));

  const Graph p = path_graph(6);
  const auto bare = endpoint_closure(PathState(p, iota_order(6)), 0);
  CHECK(bare.reachable.to_vector() == std::vector<Vertex>{5});

  const Graph k4 = complete_graph(4);
  const auto ck = endpoint_closure(PathState(k4, {0, 1, 2, 3}), 0);
  CHECK(ck.reachable.to_vector() == std::vector<Vertex>{1, 2, 3});
  CHECK(as_set(ck.reachable) == closure_by_states(k4, {0, 1, 2, 3}));

  CHECK_THROWS_AS(endpoint_closure(PathState(k4, {0, 1, 2, 3}), 1), std::invalid_argument);
}

TEST_CASE("property: endpoint closure lies inside the state-space search") {
  // Deduplicating by endpoint drops paths that share an endpoint but differ
  // elsewhere, so the closure can be a strict subset (about 4% of these cases).
  std::mt19937_64 gen(17);
  std::size_t compared = 0, equal = 0;
  for (int rep = 0; rep < 300; ++rep) {
    const std::size_t n = 4 + gen() % 5;
    Graph g = testing_support::random_graph(n, 0.45, gen);
    for (Vertex v = 0; v + 1 < n; ++v) g.add_edge(v, v + 1);
    const auto order = iota_order(n);
    const auto c = endpoint_closure(PathState(g, order), 0, 0, true);
    const auto full = closure_by_states(g, order);
    const auto got = as_set(c.reachable);
    CHECK(std::includes(full.begin(), full.end(), got.begin(), got.end()));
    CHECK(got.count(order.back()) == 1);
    equal += got == full ? 1 : 0;
    // Every witness replays to its endpoint.
    c.reachable.for_each([&](Vertex z) {
      PathState replay(g, order);
      for (Vertex pivot : c.witness[z]) replay.rotate(pivot);
      CHECK(replay.tail() == z);
      CHECK(replay.head() == 0);
    });
    const auto from_tail = endpoint_closure(PathState(g, order), order.back());
    auto reversed = order;
    std::reverse(reversed.begin(), reversed.end());
    const auto full_tail = closure_by_states(g, reversed);
    const auto got_tail = as_set(from_tail.reachable);
    CHECK(std::includes(full_tail.begin(), full_tail.end(), got_tail.begin(), got_tail.end()));
    ++compared;
  }
  CHECK(compared == 300);
  CHECK(equal >= 270);
}

TEST_CASE("posa bound") {
  const auto r = posa_bound_report(path_graph(4), 1);
  CHECK(r.closure_size == 1);
  CHECK(r.boundary_size == 1);
  CHECK(r.inequality_holds);
  CHECK(posa_bound_check(path_graph(4), 0));

  std::mt19937_64 gen(3);
  int checked = 0;
  while (checked < 200) {
    const std::size_t n = 4 + gen() % 7;
    const Graph g = connected_random(n, 0.35, gen);
    if (hamiltonian_exact(g)) continue;
    CHECK(posa_bound_report(g, 0).inequality_holds);
    ++checked;
  }
}

TEST_CASE("booster examples") {
  const Graph p4 = path_graph(4);
  const auto set = find_boosters(p4);
  REQUIRE(set.pairs.size() == 1);
  CHECK(set.pairs[0].pair.u == 0);
  CHECK(set.pairs[0].pair.v == 3);
  CHECK(set.pairs[0].effect == BoosterEffect::closes_hamilton_cycle);
  CHECK(set.exact_longest_path);

  CHECK(is_booster(p4, {0, 3}));
  CHECK_FALSE(is_booster(p4, {0, 2}));
  CHECK_FALSE(is_booster(p4, {1, 3}));
  CHECK_THROWS_AS(is_booster(p4, {0, 1}), std::invalid_argument);

  const Graph star = star_graph(3);
  for (const Edge& e : star.non_edges()) CHECK(is_booster(star, e));

  CHECK_THROWS_AS(find_boosters(cycle_graph(4)), std::invalid_argument);
  Graph two(4);
  two.add_edge(0, 1);
  two.add_edge(2, 3);
  CHECK_THROWS_AS(find_boosters(two), std::invalid_argument);
}

TEST_CASE("property: emitted boosters are genuine") {
  std::mt19937_64 gen(8);
  int checked = 0;
  while (checked < 120) {
    const std::size_t n = 4 + gen() % 6;
    const Graph g = connected_random(n, 0.3, gen);
    if (hamiltonian_exact(g)) continue;
    const auto set = find_boosters(g);
    for (const auto& b : set.pairs) {
      CHECK_FALSE(g.has_edge(b.pair.u, b.pair.v));
      CHECK(is_booster(g, b.pair));
      Graph plus = g;
      plus.add_edge(b.pair);
      if (b.effect == BoosterEffect::closes_hamilton_cycle) CHECK(hamiltonian_exact(plus));
      else CHECK(longest_path_exact(plus) > longest_path_exact(g));
    }
    ++checked;
  }
}

TEST_CASE("grow_longest_path examples") {
  CHECK(grow_longest_path(cycle_graph(6)).vertex_count() == 6);
  Graph triangles(6);
  triangles.add_edge(0, 1);
  triangles.add_edge(1, 2);
  triangles.add_edge(0, 2);
  triangles.add_edge(3, 4);
  triangles.add_edge(4, 5);
  triangles.add_edge(3, 5);
  CHECK(grow_longest_path(triangles).vertex_count() == 3);
}

TEST_CASE("property: grown paths are bounded and not rotation-extendable") {
  std::mt19937_64 gen(21);
  for (int rep = 0; rep < 500; ++rep) {
    const std::size_t n = 2 + gen() % 9;
    const Graph g = testing_support::random_graph(n, 0.35, gen);
    const PathState p = grow_longest_path(g);
    CHECK(p.check_invariants());
    CHECK(p.length() <= longest_path_exact(g));
    const VertexSet outside = p.members().complement();
    for (Vertex fixed : {p.head(), p.tail()}) {
      const auto c = endpoint_closure(p, fixed);
      c.reachable.for_each([&](Vertex z) { CHECK_FALSE(outside.intersects(g.row(z))); });
    }
  }
}

TEST_CASE("verify_hamilton_cycle") {
  const Graph c5 = cycle_graph(5);
  CHECK(verify_hamilton_cycle(c5, std::vector<Vertex>{0, 1, 2, 3, 4}));
  CHECK_FALSE(verify_hamilton_cycle(c5, std::vector<Vertex>{0, 2, 1, 3, 4}));
  CHECK_FALSE(verify_hamilton_cycle(c5, std::vector<Vertex>{0, 1, 2, 3}));
  CHECK_FALSE(verify_hamilton_cycle(c5, std::vector<Vertex>{0, 1, 2, 3, 3}));
  std::vector<Vertex> perm{0, 1, 2, 3};
  do {
    CHECK(verify_hamilton_cycle(complete_graph(4), perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
}

TEST_CASE("sprinkle examples") {
  const auto ham = sprinkle(cycle_graph(7), {});
  CHECK(ham.verdict == HamiltonResult::Verdict::found);
  CHECK(ham.edges_consumed == 0);

  const std::vector<Edge> closing{{0, 3}};
  const auto r = sprinkle(path_graph(4), closing);
  CHECK(r.verdict == HamiltonResult::Verdict::found);
  CHECK(r.edges_consumed == 1);
  CHECK(r.boosters_hit == 1);
  CHECK(verify_hamilton_cycle(cycle_graph(4), r.cycle));

  const std::vector<Edge> useless{{0, 2}};
  const auto e = sprinkle(path_graph(4), useless);
  CHECK(e.verdict == HamiltonResult::Verdict::exhausted);
  CHECK(e.best_path_vertices == 4);

  Graph two(4);
  two.add_edge(0, 1);
  two.add_edge(2, 3);
  CHECK_THROWS_AS(sprinkle(two, {}), std::invalid_argument);
}

TEST_CASE("property: sprinkling is monotone and sound") {
  std::mt19937_64 gen(4);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 6 + gen() % 40;
    Graph g = path_graph(n);
    RngStream rng(rep, 0);
    const auto stream = uniform_edge_stream(n, std::min<std::uint64_t>(3 * n, pair_count(n)), rng);
    const auto r = sprinkle(g, stream);
    CHECK(std::is_sorted(r.length_trace.begin(), r.length_trace.end()));
    for (const Edge& e : std::span(stream).first(r.edges_consumed)) g.add_edge(e);
    if (r.verdict == HamiltonResult::Verdict::found) CHECK(verify_hamilton_cycle(g, r.cycle));
  }
}

TEST_CASE("skipping unaffected stream edges does not change the outcome") {
  // Same stream, with and without the touched-vertex filter: run the engine
  // after every edge and compare final verdicts and path lengths.
  std::mt19937_64 gen(31);
  for (int rep = 0; rep < 60; ++rep) {
    const std::size_t n = 8 + gen() % 30;
    Graph g = path_graph(n);
    RngStream rng(rep, 5);
    const auto stream = uniform_edge_stream(n, 2 * n, rng);
    const auto filtered = sprinkle(g, stream);

    PosaEngine engine{Graph(g)};
    engine.run();
    std::size_t consumed = 0;
    for (const Edge& e : stream) {
      if (engine.hamiltonian()) break;
      ++consumed;
      engine.add_edge(e);
      engine.run();
    }
    CHECK(engine.hamiltonian() == (filtered.verdict == HamiltonResult::Verdict::found));
    CHECK(consumed == filtered.edges_consumed);
    CHECK(engine.path().vertex_count() == filtered.best_path_vertices);
  }
}

TEST_CASE("borrowing engines reject new edges") {
  const Graph g = path_graph(4);
  PosaEngine engine(g);
  CHECK_THROWS_AS(engine.add_edge({0, 3}), std::logic_error);
}

TEST_CASE("certificate format") {
  const std::vector<Edge> stream{{0, 3}, {1, 3}};
  const auto r = sprinkle(path_graph(4), stream);
  std::ostringstream out;
  write_certificate(out, r, stream);
  std::istringstream in(out.str());
  std::string word;
  std::size_t count = 0;
  in >> word >> count;
  CHECK(word == "cycle");
  CHECK(count == 4);
  std::vector<Vertex> cycle(count);
  for (auto& v : cycle) in >> v;
  CHECK(verify_hamilton_cycle(cycle_graph(4), cycle));
  in >> word >> count;
  CHECK(word == "consumed");
  CHECK(count == 1);
  Vertex u = 0, v = 0;
  in >> u >> v;
  CHECK(u == 0);
  CHECK(v == 3);
}
