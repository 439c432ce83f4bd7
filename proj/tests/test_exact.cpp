#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "perturb/exact.hpp"
#include "perturb/posa.hpp"
#include "support.hpp"

using namespace perturb;

namespace {

Graph two_edges() {
  Graph g(4);
  g.add_edge(0, 1);
  g.add_edge(2, 3);
  return g;
}

bool is_path(const Graph& g, const std::vector<Vertex>& p) {
  std::vector<bool> seen(g.vertex_count(), false);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[p[i]]) return false;
    seen[p[i]] = true;
    if (i > 0 && !g.has_edge(p[i - 1], p[i])) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("hamiltonian_exact examples") {
  CHECK(hamiltonian_exact(cycle_graph(5)));
  CHECK_FALSE(hamiltonian_exact(star_graph(3)));
  CHECK_FALSE(hamiltonian_exact(petersen_graph()));
  CHECK_FALSE(hamiltonian_exact(Graph(1)));
  CHECK_FALSE(hamiltonian_exact(complete_graph(2)));
  CHECK(hamiltonian_exact(complete_graph(3)));
}

TEST_CASE("Petersen non-Hamiltonicity agrees with permutation search") {
  CHECK_FALSE(testing_support::ham_by_permutations(petersen_graph()));
  OracleLimit ten;
  ten.max_n_bruteforce = 10;
  CHECK_FALSE(hamiltonian_bruteforce(petersen_graph(), ten));
}

TEST_CASE("hamilton_cycle_exact returns a valid cycle") {
  const auto c = hamilton_cycle_exact(complete_graph(6));
  REQUIRE(c.has_value());
  CHECK(verify_hamilton_cycle(complete_graph(6), *c));
  CHECK_FALSE(hamilton_cycle_exact(star_graph(4)).has_value());
}

TEST_CASE("longest_path_exact examples") {
  CHECK(longest_path_exact(path_graph(4)) == 3);
  CHECK(longest_path_exact(two_edges()) == 1);
  CHECK(longest_path_exact(petersen_graph()) == 9);
  CHECK(testing_support::longest_path_dfs(petersen_graph()) == 9);
  CHECK(longest_path_exact(Graph(3)) == 0);
  const auto w = longest_path_witness(petersen_graph());
  CHECK(w.size() == 10);
  CHECK(is_path(petersen_graph(), w));
}

TEST_CASE("hamiltonian_bruteforce examples") {
  CHECK(hamiltonian_bruteforce(complete_graph(4)));
  Graph tree(5);
  tree.add_edge(0, 1);
  tree.add_edge(0, 2);
  tree.add_edge(2, 3);
  tree.add_edge(2, 4);
  CHECK_FALSE(hamiltonian_bruteforce(tree));
}

TEST_CASE("caps are enforced") {
  CHECK_THROWS_AS(hamiltonian_bruteforce(complete_graph(10)), std::invalid_argument);
  CHECK_THROWS_AS(hamiltonian_exact(Graph(21)), std::invalid_argument);
  CHECK_THROWS_AS(longest_path_exact(Graph(21)), std::invalid_argument);
  OracleLimit tight;
  tight.memory_budget_bytes = 1000;
  CHECK_THROWS_AS(hamiltonian_exact(complete_graph(8), tight), std::invalid_argument);
}

TEST_CASE("property: oracles agree with independent references") {
  std::mt19937_64 gen(2024);
  for (int rep = 0; rep < 300; ++rep) {
    const std::size_t n = 3 + gen() % 6;
    const double p = 0.2 + 0.1 * static_cast<double>(gen() % 7);
    const Graph g = testing_support::random_graph(n, p, gen);
    const bool ham = hamiltonian_exact(g);
    CHECK(ham == hamiltonian_bruteforce(g));
    CHECK(ham == testing_support::ham_by_permutations(g));
    const std::size_t lp = longest_path_exact(g);
    CHECK(lp == testing_support::longest_path_dfs(g));
    if (ham) CHECK(lp == n - 1);
    const auto w = longest_path_witness(g);
    CHECK(w.size() == lp + 1);
    CHECK(is_path(g, w));
  }
}

TEST_CASE("property: adding an edge is monotone") {
  std::mt19937_64 gen(7);
  for (int rep = 0; rep < 150; ++rep) {
    const std::size_t n = 4 + gen() % 8;
    Graph g = testing_support::random_graph(n, 0.3, gen);
    const auto non = g.non_edges();
    if (non.empty()) continue;
    const Edge e = non[gen() % non.size()];
    const bool ham = hamiltonian_exact(g);
    const std::size_t lp = longest_path_exact(g);
    g.add_edge(e);
    CHECK(longest_path_exact(g) >= lp);
    if (ham) CHECK(hamiltonian_exact(g));
  }
}
