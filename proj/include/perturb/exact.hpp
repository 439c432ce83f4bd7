#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "perturb/graph.hpp"

namespace perturb {

/// Size caps for the exponential ground-truth routines.
struct OracleLimit {
  std::size_t max_n_dp = 20;
  std::size_t max_n_bruteforce = 9;
  /// Subset DP refuses n with 2^n * n bytes above this, even under max_n_dp.
  std::uint64_t memory_budget_bytes = std::uint64_t{4} << 30;
};

/// Hamilton cycle by subset DP over (visited set, endpoint) anchored at vertex 0.
/// Graphs with fewer than 3 vertices have no Hamilton cycle.
bool hamiltonian_exact(const Graph& g, const OracleLimit& limit = {});
std::optional<std::vector<Vertex>> hamilton_cycle_exact(const Graph& g,
                                                        const OracleLimit& limit = {});

/// Edge count of a longest path (0 for an edgeless graph).
std::size_t longest_path_exact(const Graph& g, const OracleLimit& limit = {});
/// Vertex sequence of a longest path: the first maximal vertex set in mask
/// order, ending at its lowest-index endpoint.
std::vector<Vertex> longest_path_witness(const Graph& g, const OracleLimit& limit = {});

/// Backtracking over vertex orders from vertex 0; independent of the DP.
bool hamiltonian_bruteforce(const Graph& g, const OracleLimit& limit = {});

}  // namespace perturb
