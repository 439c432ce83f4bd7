#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "perturb/exact.hpp"
#include "perturb/graph.hpp"

namespace perturb {

struct BoosterSet;
struct PosaBoundReport;

/**
 * A path v0 v1 ... vl in a graph with its inverse position map.
 *
 * `head()` is v0 and `tail()` is vl. Rotations always act on the tail: given
 * an edge from vl to an interior vi (i <= l - 2) the path becomes
 * v0 ... vi vl v(l-1) ... v(i+1), with new tail v(i+1).
 */
class PathState {
 public:
  explicit PathState(const Graph& g);
  /// Throws std::invalid_argument unless `order` is a path of distinct vertices in g.
  PathState(const Graph& g, std::vector<Vertex> order);

  const Graph& graph() const { return *graph_; }
  std::span<const Vertex> order() const { return order_; }
  bool empty() const { return order_.empty(); }
  std::size_t vertex_count() const { return order_.size(); }
  /// Number of edges.
  std::size_t length() const { return order_.empty() ? 0 : order_.size() - 1; }
  Vertex head() const { return order_.front(); }
  Vertex tail() const { return order_.back(); }
  bool spanning() const { return order_.size() == graph_->vertex_count(); }

  bool contains(Vertex v) const { return pos_[v] >= 0; }
  std::optional<std::size_t> position(Vertex v) const;
  const VertexSet& members() const { return members_; }

  /// Appends v after the tail; v must be off the path and adjacent to the tail.
  void push_back(Vertex v);
  void reverse();
  /// Rotation with pivot edge (tail, pivot).
  void rotate(Vertex pivot);
  /// Replaces the whole order (validated).
  void assign(std::vector<Vertex> order);

  /// Consecutive adjacency, distinctness and exact inverse positions.
  bool check_invariants() const;

 private:
  friend class PosaEngine;
  void set_order_unchecked(std::vector<Vertex> order);

  const Graph* graph_;
  std::vector<Vertex> order_;
  std::vector<std::int32_t> pos_;
  VertexSet members_;
};

/// Endpoints reachable by rotations that keep `fixed` pinned.
struct EndpointClosure {
  Vertex fixed = 0;
  VertexSet reachable;
  /// witness[v] replays to an endpoint v: orient the path with `fixed` as head,
  /// then call rotate(p) for each pivot p in order. Empty for the original tail.
  std::vector<std::vector<Vertex>> witness;
  bool truncated = false;  // hit the rotation cap
};

/// Breadth-first rotation closure keyed by free endpoint, lowest-index pivots
/// first. `cap` bounds the number of rotations (0 = unbounded).
EndpointClosure endpoint_closure(const PathState& path, Vertex fixed, std::size_t cap = 0,
                                 bool with_witness = false);

struct EngineOptions {
  /// Rotations allowed per improvement attempt; 0 means 4n.
  std::size_t rotation_cap = 0;
  /// Also rotate from every endpoint of the first closures (pinning it).
  bool double_closure = true;
};

struct EngineStats {
  std::uint64_t attempts = 0;
  std::uint64_t rotations = 0;
  std::uint64_t extensions = 0;
  std::uint64_t cycle_openings = 0;
};

/**
 * Rotation-extension search for a Hamilton cycle.
 *
 * The path starts as a greedy walk from vertex 0 (lowest-index unvisited
 * neighbour), extended at both ends. Each improvement attempt then explores
 * rotation closures: pinning the head, pinning the tail, and (optionally)
 * pinning every endpoint found so far. The first endpoint that has an
 * off-path neighbour extends the path; the first endpoint adjacent to the
 * pinned end closes a cycle, which is either Hamiltonian or reopened through
 * an outside neighbour into a longer path. The path length never decreases.
 *
 * An engine either borrows a frozen graph or owns one; only owning engines
 * accept new edges.
 */
class PosaEngine {
 public:
  explicit PosaEngine(const Graph& g, EngineOptions options = {});
  explicit PosaEngine(Graph&& g, EngineOptions options = {});
  PosaEngine(const PosaEngine&) = delete;
  PosaEngine& operator=(const PosaEngine&) = delete;
  ~PosaEngine();

  const Graph& graph() const { return *graph_; }
  const PathState& path() const { return path_; }
  bool hamiltonian() const { return !cycle_.empty(); }
  const std::vector<Vertex>& cycle() const { return cycle_; }
  const EngineStats& stats() const { return stats_; }

  /// Starts from `start` instead of the greedy walk (must be a path in graph()).
  void reset(const PathState& start);

  /// One attempt; true if the path grew or a Hamilton cycle closed.
  bool improve();
  /// Repeats improve() until it fails or a Hamilton cycle is found.
  void run();

  /// Owning engines only. Returns false for a pair that was already an edge.
  bool add_edge(Edge e);
  /// Whether the last failed attempt consulted a vertex of e. When false, a
  /// repeated attempt after adding e behaves exactly as the failed one.
  bool affects_last_attempt(Edge e) const;

 private:
  struct Node;
  enum class Found { none, extend, cycle };
  struct SearchHit {
    Found kind = Found::none;
    std::size_t node = 0;
  };

  void init();
  std::size_t cap() const;
  void greedy_extend();
  void extend_tail();
  SearchHit explore(std::size_t root_node, bool stop_on_hit, std::size_t& budget);
  Found classify(Vertex endpoint, Vertex pinned) const;
  void materialize(std::size_t node);
  bool close_cycle();

  std::size_t make_root(std::int32_t parent_for_chain, bool reverse);
  std::size_t view_position(std::size_t node, Vertex v) const;
  Vertex view_vertex(std::size_t node, std::size_t q) const;

  std::optional<Graph> owned_;
  const Graph* graph_;
  EngineOptions options_;
  PathState path_;
  std::vector<Vertex> cycle_;
  EngineStats stats_;

  // Search scratch, reused across attempts.
  std::vector<Node> nodes_;
  std::vector<std::int32_t> chains_;
  std::vector<std::uint32_t> stamp_;
  std::vector<std::uint32_t> degree_;
  std::uint32_t generation_ = 0;
  VertexSet off_path_;
  VertexSet touched_;
  bool last_attempt_failed_ = false;
  bool can_open_cycle_ = true;

  friend EndpointClosure endpoint_closure(const PathState&, Vertex, std::size_t, bool);
  friend BoosterSet find_boosters(const Graph&, const OracleLimit&);
  friend PosaBoundReport posa_bound_report(const Graph&, std::size_t, const OracleLimit&);
};

/// Longest path reachable by rotation-extension from `start` (or the greedy walk).
PathState grow_longest_path(const Graph& g, const std::optional<PathState>& start = std::nullopt,
                            EngineOptions options = {});

/// True iff `cycle` lists all n >= 3 vertices once and cyclically consecutive
/// vertices are adjacent.
bool verify_hamilton_cycle(const Graph& g, std::span<const Vertex> cycle);

struct HamiltonResult {
  enum class Verdict { found, exhausted };
  Verdict verdict = Verdict::exhausted;
  std::vector<Vertex> cycle;
  /// Stream items read before the verdict (all of them when exhausted).
  std::size_t edges_consumed = 0;
  /// Stream edges after which the path grew or the cycle closed.
  std::size_t boosters_hit = 0;
  /// Path vertex count before the stream and after every consumed edge.
  std::vector<std::size_t> length_trace;
  std::size_t best_path_vertices = 0;
  EngineStats stats;
};

/// Runs the engine on g, then feeds `stream` one pair at a time, retrying
/// after each new edge that the previous failed attempt depended on. Throws
/// std::invalid_argument if g is disconnected.
HamiltonResult sprinkle(Graph g, std::span<const Edge> stream, EngineOptions options = {});

/// Certificate text: "cycle <n>", n vertex lines, "consumed <k>", k "u v" lines.
void write_certificate(std::ostream& out, const HamiltonResult& result,
                       std::span<const Edge> stream);

enum class BoosterEffect { closes_hamilton_cycle, extends_longest_path };

struct Booster {
  Edge pair;
  BoosterEffect effect;
};

struct BoosterSet {
  std::vector<Booster> pairs;  // sorted by (u, v), u < v
  std::vector<Vertex> longest_path;
  /// False when the path came from the heuristic engine (n above the oracle cap).
  bool exact_longest_path = true;
};

/// Non-edges {x, y} with x in R(v0) and y in R(x) for a longest path v0...vl.
/// Throws std::invalid_argument for disconnected or Hamiltonian graphs.
BoosterSet find_boosters(const Graph& g, const OracleLimit& limit = {});

/// Ground truth: g + e is Hamiltonian or has a longer longest path than g.
bool is_booster(const Graph& g, Edge e, const OracleLimit& limit = {});

struct PosaBoundReport {
  std::size_t closure_size = 0;   // |R(v0)|
  std::size_t boundary_size = 0;  // |N(R(v0)) \ R(v0)|
  bool inequality_holds = false;  // boundary <= 2 |R| - 1
  bool closure_exceeds_k = false; // |R| >= k + 1
};

/// R(v0) for an exact longest path, measured against |N(R) \ R| <= 2|R| - 1.
PosaBoundReport posa_bound_report(const Graph& g, std::size_t k, const OracleLimit& limit = {});
bool posa_bound_check(const Graph& g, std::size_t k, const OracleLimit& limit = {});

}  // namespace perturb
