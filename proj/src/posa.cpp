#include "perturb/posa.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace perturb {

// ---------------------------------------------------------------------------
// PathState

PathState::PathState(const Graph& g)
    : graph_(&g), pos_(g.vertex_count(), -1), members_(g.vertex_count()) {}

PathState::PathState(const Graph& g, std::vector<Vertex> order) : PathState(g) {
  assign(std::move(order));
}

std::optional<std::size_t> PathState::position(Vertex v) const {
  if (pos_[v] < 0) return std::nullopt;
  return static_cast<std::size_t>(pos_[v]);
}

void PathState::set_order_unchecked(std::vector<Vertex> order) {
  for (Vertex v : order_) pos_[v] = -1;
  members_.clear();
  order_ = std::move(order);
  for (std::size_t i = 0; i < order_.size(); ++i) {
    pos_[order_[i]] = static_cast<std::int32_t>(i);
    members_.insert(order_[i]);
  }
}

void PathState::assign(std::vector<Vertex> order) {
  const std::size_t n = graph_->vertex_count();
  std::vector<bool> seen(n, false);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Vertex v = order[i];
    if (v >= n) throw std::invalid_argument("path vertex out of range");
    if (seen[v]) throw std::invalid_argument("path repeats vertex " + std::to_string(v));
    seen[v] = true;
    if (i > 0 && !graph_->has_edge(order[i - 1], v))
      throw std::invalid_argument("path uses non-edge (" + std::to_string(order[i - 1]) + ", " +
                                  std::to_string(v) + ")");
  }
  set_order_unchecked(std::move(order));
}

void PathState::push_back(Vertex v) {
  if (contains(v)) throw std::invalid_argument("push_back: vertex already on path");
  if (!order_.empty() && !graph_->has_edge(order_.back(), v))
    throw std::invalid_argument("push_back: vertex not adjacent to tail");
  pos_[v] = static_cast<std::int32_t>(order_.size());
  order_.push_back(v);
  members_.insert(v);
}

void PathState::reverse() {
  std::reverse(order_.begin(), order_.end());
  for (std::size_t i = 0; i < order_.size(); ++i) pos_[order_[i]] = static_cast<std::int32_t>(i);
}

void PathState::rotate(Vertex pivot) {
  if (order_.size() < 3) throw std::invalid_argument("rotate: path too short");
  const std::size_t l = order_.size() - 1;
  if (!contains(pivot)) throw std::invalid_argument("rotate: pivot not on path");
  const auto i = static_cast<std::size_t>(pos_[pivot]);
  if (i + 1 >= l) throw std::invalid_argument("rotate: pivot must be at position <= l - 2");
  if (!graph_->has_edge(order_[l], pivot))
    throw std::invalid_argument("rotate: (tail, pivot) is not an edge");
  std::reverse(order_.begin() + static_cast<std::ptrdiff_t>(i + 1), order_.end());
  for (std::size_t j = i + 1; j <= l; ++j) pos_[order_[j]] = static_cast<std::int32_t>(j);
}

bool PathState::check_invariants() const {
  const std::size_t n = graph_->vertex_count();
  std::size_t on_path = 0;
  for (Vertex v = 0; v < n; ++v) {
    if (pos_[v] >= 0) {
      ++on_path;
      if (static_cast<std::size_t>(pos_[v]) >= order_.size() || order_[pos_[v]] != v) return false;
      if (!members_.contains(v)) return false;
    } else if (members_.contains(v)) {
      return false;
    }
  }
  if (on_path != order_.size()) return false;
  for (std::size_t i = 1; i < order_.size(); ++i)
    if (!graph_->has_edge(order_[i - 1], order_[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Rotation views
//
// A search node denotes the base path transformed by a chain of involutions on
// positions. Entry i >= 0 is a rotation pivoting at position i (positions
// i+1..l are reversed); entry -1 reverses the whole path so the old tail is
// pinned. Position lookups therefore cost O(chain length) and nothing is
// copied until a node is materialized.

struct PosaEngine::Node {
  Vertex endpoint;
  Vertex pinned;
  std::int32_t parent;  // -1 for search roots
  Vertex pivot;         // pivot vertex of the rotation producing this node
  std::uint32_t chain_begin;
  std::uint32_t chain_len;
};

PosaEngine::~PosaEngine() = default;

namespace {

inline std::size_t apply_involution(std::int32_t i, std::size_t j, std::size_t l) {
  if (i < 0) return l - j;
  const auto ii = static_cast<std::size_t>(i);
  return j <= ii ? j : ii + 1 + l - j;
}

}  // namespace

std::size_t PosaEngine::view_position(std::size_t node, Vertex v) const {
  const Node& nd = nodes_[node];
  const std::size_t l = path_.length();
  auto j = static_cast<std::size_t>(path_.pos_[v]);
  for (std::uint32_t k = 0; k < nd.chain_len; ++k)
    j = apply_involution(chains_[nd.chain_begin + k], j, l);
  return j;
}

Vertex PosaEngine::view_vertex(std::size_t node, std::size_t q) const {
  const Node& nd = nodes_[node];
  const std::size_t l = path_.length();
  for (std::uint32_t k = nd.chain_len; k > 0; --k)
    q = apply_involution(chains_[nd.chain_begin + k - 1], q, l);
  return path_.order_[q];
}

std::size_t PosaEngine::make_root(std::int32_t parent_for_chain, bool reverse) {
  Node root{};
  root.parent = -1;
  root.pivot = 0;
  root.chain_begin = static_cast<std::uint32_t>(chains_.size());
  root.chain_len = 0;
  if (parent_for_chain >= 0) {
    const Node parent = nodes_[static_cast<std::size_t>(parent_for_chain)];
    for (std::uint32_t k = 0; k < parent.chain_len; ++k)
      chains_.push_back(chains_[parent.chain_begin + k]);
    root.chain_len = parent.chain_len;
  }
  if (reverse) {
    chains_.push_back(-1);
    ++root.chain_len;
  }
  nodes_.push_back(root);
  const std::size_t id = nodes_.size() - 1;
  nodes_[id].endpoint = view_vertex(id, path_.length());
  nodes_[id].pinned = view_vertex(id, 0);
  return id;
}

// ---------------------------------------------------------------------------
// PosaEngine

PosaEngine::PosaEngine(const Graph& g, EngineOptions options)
    : graph_(&g), options_(options), path_(g) {
  init();
}

PosaEngine::PosaEngine(Graph&& g, EngineOptions options)
    : owned_(std::move(g)), graph_(&*owned_), options_(options), path_(*graph_) {
  init();
}

void PosaEngine::init() {
  const std::size_t n = graph_->vertex_count();
  stamp_.assign(n, 0);
  degree_.resize(n);
  for (Vertex v = 0; v < n; ++v) degree_[v] = static_cast<std::uint32_t>(graph_->degree(v));
  touched_ = VertexSet(n);
  off_path_ = VertexSet::full(n);
  path_.push_back(0);
  off_path_.erase(0);
  greedy_extend();
}

std::size_t PosaEngine::cap() const {
  return options_.rotation_cap != 0 ? options_.rotation_cap : 4 * graph_->vertex_count();
}

void PosaEngine::reset(const PathState& start) {
  std::vector<Vertex> order(start.order().begin(), start.order().end());
  if (order.empty()) throw std::invalid_argument("reset: empty start path");
  path_.assign(std::move(order));
  off_path_ = path_.members().complement();
  cycle_.clear();
  last_attempt_failed_ = false;
}

void PosaEngine::extend_tail() {
  const std::size_t n = graph_->vertex_count();
  while (true) {
    const auto r = graph_->row(path_.tail());
    const auto off = off_path_.words();
    // Lowest-degree outside neighbour, ties to the lowest index.
    std::size_t next = n;
    std::size_t next_degree = n;
    for (std::size_t w = 0; w < off.size(); ++w) {
      Word bits = off[w] & r[w];
      while (bits != 0) {
        const std::size_t v = w * kWordBits + static_cast<std::size_t>(std::countr_zero(bits));
        bits &= bits - 1;
        if (degree_[v] < next_degree) {
          next = v;
          next_degree = degree_[v];
        }
      }
    }
    if (next == n) return;
    const auto v = static_cast<Vertex>(next);
    path_.pos_[v] = static_cast<std::int32_t>(path_.order_.size());
    path_.order_.push_back(v);
    path_.members_.insert(v);
    off_path_.erase(v);
    ++stats_.extensions;
  }
}

void PosaEngine::greedy_extend() {
  extend_tail();
  if (off_path_.intersects(graph_->row(path_.head()))) {
    path_.reverse();
    extend_tail();
  }
}

PosaEngine::Found PosaEngine::classify(Vertex endpoint, Vertex pinned) const {
  if (off_path_.intersects(graph_->row(endpoint))) return Found::extend;
  if (path_.length() >= 2 && graph_->has_edge(endpoint, pinned) &&
      (path_.spanning() || can_open_cycle_))
    return Found::cycle;
  return Found::none;
}

PosaEngine::SearchHit PosaEngine::explore(std::size_t root, bool stop_on_hit,
                                          std::size_t& budget) {
  if (++generation_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0);
    generation_ = 1;
  }
  const std::size_t l = path_.length();
  const Vertex pinned = nodes_[root].pinned;
  stamp_[nodes_[root].endpoint] = generation_;
  touched_.insert(pinned);
  touched_.insert(nodes_[root].endpoint);
  if (stop_on_hit) {
    const Found f = classify(nodes_[root].endpoint, pinned);
    if (f != Found::none) return {f, root};
  }
  for (std::size_t head = root; head < nodes_.size(); ++head) {
    const Vertex x = nodes_[head].endpoint;
    for (std::size_t y = graph_->next_neighbor(x, 0); y < graph_->vertex_count();
         y = graph_->next_neighbor(x, y + 1)) {
      const auto yv = static_cast<Vertex>(y);
      if (!path_.contains(yv)) continue;
      const std::size_t q = view_position(head, yv);
      if (q + 2 > l) continue;
      const Vertex z = view_vertex(head, q + 1);
      if (stamp_[z] == generation_) continue;
      if (budget == 0) return {};
      --budget;
      ++stats_.rotations;
      stamp_[z] = generation_;
      touched_.insert(z);

      const Node parent = nodes_[head];
      Node child{};
      child.endpoint = z;
      child.pinned = pinned;
      child.parent = static_cast<std::int32_t>(head);
      child.pivot = yv;
      child.chain_begin = static_cast<std::uint32_t>(chains_.size());
      child.chain_len = parent.chain_len + 1;
      for (std::uint32_t k = 0; k < parent.chain_len; ++k)
        chains_.push_back(chains_[parent.chain_begin + k]);
      chains_.push_back(static_cast<std::int32_t>(q));
      nodes_.push_back(child);

      if (stop_on_hit) {
        const Found f = classify(z, pinned);
        if (f != Found::none) return {f, nodes_.size() - 1};
      }
    }
  }
  return {};
}

void PosaEngine::materialize(std::size_t node) {
  const Node nd = nodes_[node];
  auto& order = path_.order_;
  const std::size_t l = path_.length();
  for (std::uint32_t k = 0; k < nd.chain_len; ++k) {
    const std::int32_t i = chains_[nd.chain_begin + k];
    const std::size_t from = i < 0 ? 0 : static_cast<std::size_t>(i) + 1;
    std::reverse(order.begin() + static_cast<std::ptrdiff_t>(from), order.end());
    for (std::size_t j = from; j <= l; ++j) path_.pos_[order[j]] = static_cast<std::int32_t>(j);
  }
}

bool PosaEngine::close_cycle() {
  if (path_.spanning()) {
    cycle_ = path_.order_;
    return true;
  }
  // Open the cycle through the lowest-index outside vertex u at its
  // lowest-index cycle neighbour w: u, w, w-1, ..., v0, vl, ..., w+1.
  std::size_t u = off_path_.find_first();
  while (u < graph_->vertex_count() && !path_.members_.intersects(graph_->row(static_cast<Vertex>(u))))
    u = off_path_.find_next(u + 1);
  if (u == graph_->vertex_count()) throw std::logic_error("close_cycle: no outside neighbour");
  const auto uv = static_cast<Vertex>(u);
  std::size_t w = path_.members_.find_first();
  while (!graph_->has_edge(uv, static_cast<Vertex>(w))) w = path_.members_.find_next(w + 1);
  const auto& old = path_.order_;
  const std::size_t l = path_.length();
  const auto j = static_cast<std::size_t>(path_.pos_[w]);
  std::vector<Vertex> next;
  next.reserve(old.size() + 1);
  next.push_back(uv);
  for (std::size_t k = j + 1; k-- > 0;) next.push_back(old[k]);
  for (std::size_t k = l; k > j; --k) next.push_back(old[k]);
  path_.set_order_unchecked(std::move(next));
  off_path_.erase(uv);
  ++stats_.cycle_openings;
  return false;
}

bool PosaEngine::improve() {
  if (hamiltonian()) return false;
  ++stats_.attempts;
  last_attempt_failed_ = false;
  nodes_.clear();
  chains_.clear();
  touched_.clear();

  can_open_cycle_ = false;
  off_path_.for_each([&](Vertex u) {
    if (!can_open_cycle_ && path_.members_.intersects(graph_->row(u))) can_open_cycle_ = true;
  });

  std::size_t budget = cap();
  auto apply = [&](const SearchHit& hit) {
    materialize(hit.node);
    if (hit.kind == Found::cycle && close_cycle()) return true;
    greedy_extend();
    return true;
  };

  const std::size_t head_root = make_root(-1, false);
  if (auto hit = explore(head_root, true, budget); hit.kind != Found::none) return apply(hit);
  const std::size_t head_layer_end = nodes_.size();
  const std::size_t tail_root = make_root(-1, true);
  if (auto hit = explore(tail_root, true, budget); hit.kind != Found::none) return apply(hit);
  const std::size_t tail_layer_end = nodes_.size();

  if (options_.double_closure) {
    auto second_layer = [&](std::size_t begin, std::size_t end) -> SearchHit {
      for (std::size_t id = begin; id < end && budget > 0; ++id) {
        const std::size_t root = make_root(static_cast<std::int32_t>(id), true);
        if (auto hit = explore(root, true, budget); hit.kind != Found::none) return hit;
      }
      return {};
    };
    if (auto hit = second_layer(head_root + 1, head_layer_end); hit.kind != Found::none)
      return apply(hit);
    if (auto hit = second_layer(tail_root + 1, tail_layer_end); hit.kind != Found::none)
      return apply(hit);
  }
  last_attempt_failed_ = true;
  return false;
}

void PosaEngine::run() {
  while (!hamiltonian() && improve()) {
  }
}

bool PosaEngine::add_edge(Edge e) {
  if (!owned_) throw std::logic_error("add_edge on an engine that borrows its graph");
  if (!owned_->add_edge(e)) return false;
  ++degree_[e.u];
  ++degree_[e.v];
  return true;
}

bool PosaEngine::affects_last_attempt(Edge e) const {
  if (!last_attempt_failed_) return true;
  if (touched_.contains(e.u) || touched_.contains(e.v)) return true;
  // A first bridge between the path and the outside makes cycles reopenable.
  return !can_open_cycle_ && (path_.contains(e.u) != path_.contains(e.v));
}

// ---------------------------------------------------------------------------

EndpointClosure endpoint_closure(const PathState& path, Vertex fixed, std::size_t cap,
                                 bool with_witness) {
  if (path.empty() || (fixed != path.head() && fixed != path.tail()))
    throw std::invalid_argument("endpoint_closure: fixed vertex is not an endpoint");
  PosaEngine engine(path.graph());
  engine.reset(path);
  const bool reverse = fixed != path.head();
  const std::size_t root = engine.make_root(-1, reverse);
  std::size_t budget = cap == 0 ? std::numeric_limits<std::size_t>::max() : cap;
  engine.explore(root, false, budget);

  const std::size_t n = path.graph().vertex_count();
  EndpointClosure out;
  out.fixed = fixed;
  out.reachable = VertexSet(n);
  out.truncated = budget == 0;
  if (with_witness) out.witness.assign(n, {});
  for (std::size_t id = root; id < engine.nodes_.size(); ++id) {
    const Vertex z = engine.nodes_[id].endpoint;
    out.reachable.insert(z);
    if (!with_witness) continue;
    std::vector<Vertex> pivots;
    for (std::int32_t k = static_cast<std::int32_t>(id); engine.nodes_[k].parent >= 0;
         k = engine.nodes_[k].parent)
      pivots.push_back(engine.nodes_[k].pivot);
    out.witness[z].assign(pivots.rbegin(), pivots.rend());
  }
  return out;
}

PathState grow_longest_path(const Graph& g, const std::optional<PathState>& start,
                            EngineOptions options) {
  PosaEngine engine(g, options);
  if (start) engine.reset(*start);
  engine.run();
  return PathState(g, std::vector<Vertex>(engine.path().order().begin(),
                                          engine.path().order().end()));
}

bool verify_hamilton_cycle(const Graph& g, std::span<const Vertex> cycle) {
  const std::size_t n = g.vertex_count();
  if (n < 3 || cycle.size() != n) return false;
  std::vector<bool> seen(n, false);
  for (Vertex v : cycle) {
    if (v >= n || seen[v]) return false;
    seen[v] = true;
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!g.has_edge(cycle[i], cycle[(i + 1) % n])) return false;
  return true;
}

HamiltonResult sprinkle(Graph g, std::span<const Edge> stream, EngineOptions options) {
  if (!is_connected(g)) throw std::invalid_argument("sprinkle: graph is disconnected");
  PosaEngine engine(std::move(g), options);
  HamiltonResult result;
  engine.run();
  result.length_trace.push_back(engine.path().vertex_count());
  std::size_t consumed = 0;
  for (const Edge& e : stream) {
    if (engine.hamiltonian()) break;
    ++consumed;
    const std::size_t before = engine.path().vertex_count();
    if (engine.add_edge(e) && engine.affects_last_attempt(e)) {
      engine.run();
      if (engine.hamiltonian() || engine.path().vertex_count() > before) ++result.boosters_hit;
    }
    result.length_trace.push_back(engine.path().vertex_count());
  }
  result.edges_consumed = consumed;
  result.best_path_vertices = engine.path().vertex_count();
  result.stats = engine.stats();
  if (engine.hamiltonian()) {
    result.verdict = HamiltonResult::Verdict::found;
    result.cycle = engine.cycle();
  }
  return result;
}

void write_certificate(std::ostream& out, const HamiltonResult& result,
                       std::span<const Edge> stream) {
  out << "cycle " << result.cycle.size() << '\n';
  for (Vertex v : result.cycle) out << v << '\n';
  const std::size_t k = std::min(result.edges_consumed, stream.size());
  out << "consumed " << k << '\n';
  for (std::size_t i = 0; i < k; ++i) {
    const Edge e = stream[i].normalized();
    out << e.u << ' ' << e.v << '\n';
  }
}

// ---------------------------------------------------------------------------
// Boosters

BoosterSet find_boosters(const Graph& g, const OracleLimit& limit) {
  if (!is_connected(g)) throw std::invalid_argument("find_boosters: graph is disconnected");
  const std::size_t n = g.vertex_count();
  BoosterSet out;
  std::size_t cap = std::numeric_limits<std::size_t>::max();
  if (n <= limit.max_n_dp) {
    if (hamiltonian_exact(g, limit))
      throw std::invalid_argument("find_boosters: graph is Hamiltonian");
    out.longest_path = longest_path_witness(g, limit);
  } else {
    PosaEngine probe(g);
    probe.run();
    if (probe.hamiltonian()) throw std::invalid_argument("find_boosters: graph is Hamiltonian");
    out.longest_path.assign(probe.path().order().begin(), probe.path().order().end());
    out.exact_longest_path = false;
    cap = 4 * n;
  }

  PosaEngine engine(g);
  engine.reset(PathState(g, out.longest_path));
  const auto effect = out.longest_path.size() == n ? BoosterEffect::closes_hamilton_cycle
                                                   : BoosterEffect::extends_longest_path;
  std::size_t budget = cap;
  const std::size_t root = engine.make_root(-1, false);
  engine.explore(root, false, budget);
  const std::size_t first_layer_end = engine.nodes_.size();

  std::set<std::pair<Vertex, Vertex>> pairs;
  for (std::size_t id = root; id < first_layer_end; ++id) {
    const Vertex x = engine.nodes_[id].endpoint;
    std::size_t inner_budget = cap;
    const std::size_t inner_root = engine.make_root(static_cast<std::int32_t>(id), true);
    engine.explore(inner_root, false, inner_budget);
    for (std::size_t k = inner_root; k < engine.nodes_.size(); ++k) {
      const Vertex y = engine.nodes_[k].endpoint;
      if (y == x || g.has_edge(x, y)) continue;
      pairs.insert(std::minmax(x, y));
    }
  }
  for (const auto& [u, v] : pairs) out.pairs.push_back({{u, v}, effect});
  return out;
}

bool is_booster(const Graph& g, Edge e, const OracleLimit& limit) {
  if (e.u == e.v || e.u >= g.vertex_count() || e.v >= g.vertex_count())
    throw std::invalid_argument("is_booster: invalid pair");
  if (g.has_edge(e.u, e.v)) throw std::invalid_argument("is_booster: pair is already an edge");
  const std::size_t before = longest_path_exact(g, limit);
  Graph plus = g;
  plus.add_edge(e);
  return hamiltonian_exact(plus, limit) || longest_path_exact(plus, limit) > before;
}

PosaBoundReport posa_bound_report(const Graph& g, std::size_t k, const OracleLimit& limit) {
  const PathState longest(g, longest_path_witness(g, limit));
  const EndpointClosure closure = endpoint_closure(longest, longest.head());
  PosaBoundReport report;
  report.closure_size = closure.reachable.count();
  report.boundary_size = external_neighborhood_size(g, closure.reachable);
  report.inequality_holds = report.boundary_size + 1 <= 2 * report.closure_size;
  report.closure_exceeds_k = report.closure_size >= k + 1;
  return report;
}

bool posa_bound_check(const Graph& g, std::size_t k, const OracleLimit& limit) {
  return posa_bound_report(g, k, limit).inequality_holds;
}

}  // namespace perturb
