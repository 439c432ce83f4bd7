#include "perturb/expansion.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

#include "perturb/generators.hpp"

namespace perturb {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::certified: return "certified";
    case Verdict::falsified: return "falsified";
    case Verdict::not_falsified: return "not-falsified";
  }
  return "unknown";
}

namespace {

// Condition |N(X) \ X| >= factor |X| + constant, or > when strict.
struct Condition {
  double factor = 2.0;
  double constant = 0.0;
  bool strict = false;

  double required(std::size_t size) const {
    return factor * static_cast<double>(size) + constant;
  }
  bool violated(std::size_t external, std::size_t size) const {
    const auto ext = static_cast<double>(external);
    return strict ? ext <= required(size) : ext < required(size);
  }
};

std::size_t count_and_not(std::span<const Word> a, std::span<const Word> b) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < a.size(); ++i) c += static_cast<std::size_t>(std::popcount(a[i] & ~b[i]));
  return c;
}

// A vertex set grown one vertex at a time with its neighbourhood union.
class GrowingSet {
 public:
  explicit GrowingSet(const Graph& g)
      : g_(&g), members_(g.vertex_count()), reach_(g.vertex_count()) {}

  void add(Vertex v) {
    members_.insert(v);
    reach_.or_words(g_->row(v));
    ++size_;
  }
  std::size_t size() const { return size_; }
  const VertexSet& members() const { return members_; }
  const VertexSet& reach() const { return reach_; }
  std::size_t external() const { return count_and_not(reach_.words(), members_.words()); }

  // External size after adding c, where c is not yet a member.
  std::size_t external_with(Vertex c) const {
    const auto r = g_->row(c);
    const auto u = reach_.words();
    const auto m = members_.words();
    std::size_t total = 0;
    for (std::size_t i = 0; i < u.size(); ++i)
      total += static_cast<std::size_t>(std::popcount((u[i] | r[i]) & ~m[i]));
    return total - (reach_.contains(c) ? 1 : 0);
  }

 private:
  const Graph* g_;
  VertexSet members_;
  VertexSet reach_;
  std::size_t size_ = 0;
};

std::vector<Vertex> degree_order(const Graph& g) {
  std::vector<Vertex> order(g.vertex_count());
  std::iota(order.begin(), order.end(), Vertex{0});
  std::vector<std::size_t> deg(g.vertex_count());
  for (Vertex v = 0; v < g.vertex_count(); ++v) deg[v] = g.degree(v);
  std::stable_sort(order.begin(), order.end(),
                   [&](Vertex a, Vertex b) { return deg[a] < deg[b]; });
  return order;
}

std::vector<std::size_t> log_grid(std::size_t lo, std::size_t hi, std::size_t points) {
  std::vector<std::size_t> grid;
  if (lo > hi) return grid;
  if (points < 2 || lo == hi) return {lo};
  const double ratio = static_cast<double>(hi) / static_cast<double>(lo);
  for (std::size_t i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(points - 1);
    auto s = static_cast<std::size_t>(std::llround(static_cast<double>(lo) * std::pow(ratio, t)));
    s = std::clamp(s, lo, hi);
    if (grid.empty() || grid.back() != s) grid.push_back(s);
  }
  return grid;
}

VertexSet random_subset(std::size_t n, std::size_t size, RngStream& rng) {
  const bool invert = 2 * size > n;
  const std::size_t draws = invert ? n - size : size;
  VertexSet s(n);
  std::size_t have = 0;
  while (have < draws) {
    const auto v = static_cast<Vertex>(rng.below(n));
    if (!s.contains(v)) {
      s.insert(v);
      ++have;
    }
  }
  return invert ? s.complement() : s;
}

bool has_edge_between(const Graph& g, const VertexSet& a, std::span<const Vertex> b) {
  for (Vertex v : b)
    if (a.intersects(g.row(v))) return true;
  return false;
}

ExpansionReport e3_sampled_pairs(const Graph& r, std::size_t q, std::size_t budget,
                                 RngStream& rng) {
  const std::size_t n = r.vertex_count();
  ExpansionReport rep;
  if (n < 2 * q) {
    rep.verdict = Verdict::certified;
    rep.note = "no two disjoint quarter-size sets";
    return rep;
  }
  auto fail = [&](const VertexSet& a, std::vector<Vertex> b) {
    rep.verdict = Verdict::falsified;
    rep.witness = a.to_vector();
    std::sort(b.begin(), b.end());
    rep.witness_other = std::move(b);
    rep.witness_boundary = external_neighborhood_size(r, a);
    return rep;
  };

  const auto order = degree_order(r);
  VertexSet a(n);
  for (std::size_t i = 0; i < q; ++i) a.insert(order[i]);
  std::vector<Vertex> b(order.begin() + static_cast<std::ptrdiff_t>(q),
                        order.begin() + static_cast<std::ptrdiff_t>(2 * q));
  ++rep.sets_checked;
  if (!has_edge_between(r, a, b)) return fail(a, std::move(b));

  for (std::size_t t = 0; t < budget; ++t) {
    a = random_subset(n, q, rng);
    VertexSet taken = a;
    b.clear();
    while (b.size() < q) {
      const auto v = static_cast<Vertex>(rng.below(n));
      if (taken.contains(v)) continue;
      taken.insert(v);
      b.push_back(v);
    }
    ++rep.sets_checked;
    if (!has_edge_between(r, a, b)) return fail(a, std::move(b));
  }
  return rep;
}

/**
 * Candidate generator shared by the expansion falsifiers.
 *
 * `test(set)` returns true when the set (at its current size) is a witness;
 * the first witness ends the search. Sizes outside [lo, hi] are not tested.
 */
class Falsifier {
 public:
  using Test = std::function<bool(const GrowingSet&)>;

  Falsifier(const Graph& g, std::size_t lo, std::size_t hi, Test test)
      : g_(g), lo_(std::max<std::size_t>(lo, 1)), hi_(std::min(hi, g.vertex_count())),
        test_(std::move(test)) {}

  bool empty_range() const { return lo_ > hi_; }
  std::size_t sets_checked() const { return checked_; }
  const std::optional<GrowingSet>& witness() const { return witness_; }

  bool sequence(std::span<const Vertex> order) {
    GrowingSet set(g_);
    for (Vertex v : order) {
      if (set.size() >= hi_) break;
      set.add(v);
      if (probe(set)) return true;
    }
    return false;
  }

  bool ball(Vertex seed) {
    std::vector<Vertex> order{seed};
    VertexSet seen(g_.vertex_count());
    seen.insert(seed);
    for (std::size_t i = 0; i < order.size() && order.size() < hi_; ++i)
      g_.for_each_neighbor(order[i], [&](Vertex u) {
        if (!seen.contains(u)) {
          seen.insert(u);
          order.push_back(u);
        }
      });
    return sequence(order);
  }

  // Adds, at each step, the sampled candidate that keeps |N(X) \ X| smallest.
  bool greedy(Vertex seed, std::span<const Vertex> fallback_order, RngStream& rng,
              std::size_t candidates = 24) {
    const std::size_t n = g_.vertex_count();
    GrowingSet set(g_);
    set.add(seed);
    if (probe(set)) return true;
    std::size_t fallback = 0;
    while (set.size() < hi_) {
      VertexSet boundary = set.reach();
      boundary -= set.members();
      Vertex best = 0;
      std::size_t best_ext = static_cast<std::size_t>(-1);
      if (boundary.empty()) {
        while (fallback < fallback_order.size() && set.members().contains(fallback_order[fallback]))
          ++fallback;
        if (fallback == fallback_order.size()) break;
        best = fallback_order[fallback];
      } else {
        for (std::size_t c = 0; c < candidates; ++c) {
          std::size_t v = boundary.find_next(rng.below(n));
          if (v == n) v = boundary.find_first();
          const std::size_t ext = set.external_with(static_cast<Vertex>(v));
          if (ext < best_ext || (ext == best_ext && v < best)) {
            best_ext = ext;
            best = static_cast<Vertex>(v);
          }
        }
      }
      set.add(best);
      if (probe(set)) return true;
    }
    return false;
  }

  bool uniform(std::size_t budget, RngStream& rng) {
    const auto grid = log_grid(lo_, hi_, 24);
    for (std::size_t i = 0; i < budget && !grid.empty(); ++i) {
      const std::size_t size = grid[i % grid.size()];
      const VertexSet pick = random_subset(g_.vertex_count(), size, rng);
      GrowingSet set(g_);
      pick.for_each([&](Vertex v) { set.add(v); });
      if (probe(set)) return true;
    }
    return false;
  }

 private:
  bool probe(const GrowingSet& set) {
    if (set.size() < lo_ || set.size() > hi_) return false;
    ++checked_;
    if (!test_(set)) return false;
    witness_ = set;
    return true;
  }

  const Graph& g_;
  std::size_t lo_;
  std::size_t hi_;
  Test test_;
  std::size_t checked_ = 0;
  std::optional<GrowingSet> witness_;
};

// Vertices ordered by how little their closed neighbourhood N[v] expands,
// |N(N[v]) \ N[v]| / |N[v]|. Dense graphs are scored on a random sample of
// vertices so the row scans stay within `word_budget`.
std::vector<Vertex> local_expansion_order(const Graph& g, RngStream& rng,
                                          double word_budget = 2e9) {
  const std::size_t n = g.vertex_count();
  const double words = static_cast<double>(words_for(n));
  double work = 0;
  for (Vertex v = 0; v < n; ++v) work += (static_cast<double>(g.degree(v)) + 1) * words;
  const double keep = std::min(1.0, word_budget / std::max(work, 1.0));
  std::vector<std::pair<double, Vertex>> scored;
  for (Vertex v = 0; v < n; ++v) {
    if (keep < 1.0 && rng.uniform() >= keep) continue;
    VertexSet closed(n);
    closed.or_words(g.row(v));
    closed.insert(v);
    VertexSet reach(n);
    closed.for_each([&](Vertex u) { reach.or_words(g.row(u)); });
    reach -= closed;
    scored.emplace_back(static_cast<double>(reach.count()) / static_cast<double>(closed.count()), v);
  }
  std::sort(scored.begin(), scored.end());
  std::vector<Vertex> order;
  order.reserve(scored.size());
  for (const auto& [score, v] : scored) order.push_back(v);
  return order;
}

// Structured candidates, then uniform samples.
void run_falsifier(Falsifier& f, const Graph& g, std::size_t budget, RngStream& rng) {
  if (f.empty_range()) return;
  const auto order = degree_order(g);
  if (f.sequence(order)) return;
  const std::size_t seeds = std::min<std::size_t>(8, g.vertex_count());
  for (std::size_t i = 0; i < seeds; ++i)
    if (f.ball(order[i])) return;
  for (std::size_t i = 0; i < seeds; ++i) {
    const Vertex seed = i < seeds / 2 ? order[i] : static_cast<Vertex>(rng.below(g.vertex_count()));
    if (f.greedy(seed, order, rng)) return;
  }
  const auto local = local_expansion_order(g, rng);
  for (std::size_t i = 0; i < std::min(seeds, local.size()); ++i)
    if (f.greedy(local[i], order, rng)) return;
  f.uniform(budget, rng);
}

ExpansionReport condition_report(const Graph& g, const Condition& cond, std::size_t lo,
                                 std::size_t hi, std::size_t budget, RngStream& rng) {
  Falsifier f(g, lo, hi, [&](const GrowingSet& s) { return cond.violated(s.external(), s.size()); });
  run_falsifier(f, g, budget, rng);
  ExpansionReport report;
  report.sets_checked = f.sets_checked();
  if (f.empty_range()) {
    report.verdict = Verdict::certified;
    report.note = "empty size range";
    return report;
  }
  if (!f.witness()) {
    report.verdict = Verdict::not_falsified;
    return report;
  }
  const VertexSet& w = f.witness()->members();
  report.verdict = Verdict::falsified;
  report.witness = w.to_vector();
  report.witness_boundary = external_neighborhood_size(g, w);
  report.required = cond.required(report.witness.size());
  if (!cond.violated(report.witness_boundary, report.witness.size()))
    throw std::logic_error("falsifier witness does not re-verify");
  return report;
}

}  // namespace

// ---------------------------------------------------------------------------

ExpansionReport check_expander_exact(const Graph& g, const ExpansionSpec& spec,
                                     std::uint64_t enumeration_budget) {
  const std::size_t n = g.vertex_count();
  const std::size_t lo = std::max<std::size_t>(spec.min_size, 1);
  const std::size_t hi = std::min(spec.k_bound, n);
  if (!(spec.factor > 0.0)) throw std::invalid_argument("expansion factor must be positive");
  std::uint64_t total = 0;
  std::uint64_t binom = 1;
  for (std::size_t s = 1; s <= hi; ++s) {
    binom = binom * (n - s + 1) / s;
    if (s >= lo) total += binom;
    if (total > enumeration_budget || binom > enumeration_budget)
      throw std::invalid_argument("exact expansion check needs more than " +
                                  std::to_string(enumeration_budget) +
                                  " subsets; use randomized mode");
  }

  const Condition cond{spec.factor, 0.0, false};
  ExpansionReport report;
  report.verdict = Verdict::certified;
  std::vector<Vertex> chosen;
  std::vector<VertexSet> reach;  // reach[i] = N(chosen[0..i])
  VertexSet members(n);

  // Depth-first over combinations of a fixed size `target`.
  std::function<bool(std::size_t, std::size_t)> walk = [&](std::size_t start, std::size_t target) {
    for (std::size_t v = start; v + (target - chosen.size()) <= n; ++v) {
      const auto vv = static_cast<Vertex>(v);
      VertexSet r = chosen.empty() ? VertexSet(n) : reach.back();
      r.or_words(g.row(vv));
      chosen.push_back(vv);
      members.insert(vv);
      reach.push_back(std::move(r));
      bool found = false;
      if (chosen.size() == target) {
        ++report.sets_checked;
        const std::size_t ext = count_and_not(reach.back().words(), members.words());
        if (cond.violated(ext, target)) {
          report.verdict = Verdict::falsified;
          report.witness = chosen;
          report.witness_boundary = ext;
          report.required = cond.required(target);
          found = true;
        }
      } else {
        found = walk(v + 1, target);
      }
      members.erase(vv);
      chosen.pop_back();
      reach.pop_back();
      if (found) return true;
    }
    return false;
  };
  for (std::size_t s = lo; s <= hi; ++s)
    if (walk(0, s)) break;
  return report;
}

std::size_t exact_expansion_parameter(const Graph& g, double factor,
                                      std::uint64_t enumeration_budget) {
  std::size_t k = 0;
  while (k < g.vertex_count()) {
    ExpansionSpec spec;
    spec.k_bound = k + 1;
    spec.min_size = k + 1;
    spec.factor = factor;
    if (check_expander_exact(g, spec, enumeration_budget).verdict == Verdict::falsified) break;
    ++k;
  }
  return k;
}

ExpansionReport falsify_expander_randomized(const Graph& g, const ExpansionSpec& spec,
                                            RngStream& rng) {
  if (!(spec.factor > 0.0)) throw std::invalid_argument("expansion factor must be positive");
  ExpansionReport report = condition_report(g, Condition{spec.factor, 0.0, false}, spec.min_size,
                                            spec.k_bound, spec.sample_budget, rng);
  if (report.verdict == Verdict::certified) report.verdict = Verdict::not_falsified;
  return report;
}

// ---------------------------------------------------------------------------

E123Params make_e123_params_explicit(std::size_t n, double lambda, std::size_t d, double K,
                                     double eta) {
  if (!(K > 0.0)) throw std::invalid_argument("K must be positive");
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  const double nd = static_cast<double>(n);
  const double e1_lower = K * static_cast<double>(d) / lambda;
  const double e1_upper = K * nd / (2.0 * lambda);
  if (e1_lower > nd / 4.0)
    throw std::invalid_argument("E1 band is empty: K d / lambda = " + std::to_string(e1_lower) +
                                " exceeds n/4");
  E123Params p;
  p.n = n;
  p.K = K;
  p.lambda = lambda;
  p.d = d;
  p.eta = eta;
  const auto quarter = static_cast<std::size_t>(std::floor(nd / 4.0));
  p.e1_lo = static_cast<std::size_t>(std::ceil(e1_lower - 1e-9));
  p.e1_clamped = e1_upper > nd / 4.0;
  p.e1_hi = std::min(static_cast<std::size_t>(std::floor(e1_upper + 1e-9)), quarter);
  p.e2_lo = static_cast<std::size_t>(std::floor(e1_upper + 1e-9)) + 1;
  p.e2_hi = quarter;
  p.e3_size = (n + 3) / 4;
  return p;
}

E123Params make_e123_params(std::size_t n, double alpha, double eta, double K) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  const double lambda = (1.0 + eta) * std::log(1.0 / alpha);
  return make_e123_params_explicit(n, lambda, ceil_alpha_n(alpha, n), K, eta);
}

E123Report check_e1_e2_e3(const Graph& r, const E123Params& params, RngStream& rng,
                          std::size_t budget) {
  if (r.vertex_count() != params.n) throw std::invalid_argument("E1-E3: vertex count mismatch");
  const std::size_t n = r.vertex_count();
  E123Report out;
  out.degree_log_ratio = static_cast<double>(params.d) / std::log(static_cast<double>(n));

  RngStream e1_rng = rng.derive(1);
  out.e1 = condition_report(r, Condition{params.lambda / params.K, 0.0, true}, params.e1_lo,
                            params.e1_hi, budget, e1_rng);
  if (params.e1_clamped) out.e1.note = "upper band edge K n/(2 lambda) clamped to n/4";

  RngStream e2_rng = rng.derive(2);
  out.e2 = condition_report(r, Condition{0.0, static_cast<double>(n) / 2.0, true}, params.e2_lo,
                            params.e2_hi, budget, e2_rng);
  if (params.e2_lo > params.e2_hi) out.e2.note = "band empty: K n/(2 lambda) >= n/4";

  const std::size_t q = params.e3_size;
  RngStream e3_rng = rng.derive(3);
  out.e3 = e3_sampled_pairs(r, q, budget, e3_rng);

  // Some B avoids A entirely iff at least q vertices lie outside A u N(A).
  RngStream strong_rng = rng.derive(4);
  Falsifier f(r, q, q, [&](const GrowingSet& s) {
    return n - (s.reach() | s.members()).count() >= q;
  });
  if (n < 2 * q) {
    out.e3_strong.verdict = Verdict::certified;
    out.e3_strong.note = "no two disjoint quarter-size sets";
    return out;
  }
  run_falsifier(f, r, budget, strong_rng);
  out.e3_strong.sets_checked = f.sets_checked();
  if (f.witness()) {
    const VertexSet& a = f.witness()->members();
    auto b = (external_neighborhood(r, a) | a).complement().to_vector();
    b.resize(q);
    out.e3_strong.verdict = Verdict::falsified;
    out.e3_strong.witness = a.to_vector();
    out.e3_strong.witness_other = std::move(b);
    out.e3_strong.witness_boundary = external_neighborhood_size(r, a);
    if (has_edge_between(r, a, out.e3_strong.witness_other))
      throw std::logic_error("E3 witness pair has an edge");
  } else {
    out.e3_strong.verdict = Verdict::not_falsified;
  }
  return out;
}

H1Report h1_claim_check_union(const Graph& h1, std::size_t d, RngStream& rng,
                              std::size_t budget) {
  if (min_degree(h1) < d)
    throw std::invalid_argument("h1 check: minimum degree " + std::to_string(min_degree(h1)) +
                                " is below d = " + std::to_string(d));
  const std::size_t n = h1.vertex_count();
  H1Report out;
  out.small_bound = d / 3;
  // d - |X| + 1 >= 2|X| holds for every |X| <= floor(d/3); no sets are examined.
  out.small_sets.verdict = Verdict::certified;
  out.small_sets.note = "min degree d gives d - |X| + 1 >= 2|X| for |X| <= floor(d/3)";
  out.small_sets_enumerated = 0;

  out.large_sets = condition_report(h1, Condition{2.0, 0.0, false}, out.small_bound + 1, n / 4,
                                    budget, rng);
  if (out.large_sets.verdict == Verdict::certified) out.large_sets.note = "empty size range";
  out.connected = is_connected(h1);
  return out;
}

H1Report h1_claim_check(const Graph& g_alpha, const Graph& r1, std::size_t d, RngStream& rng,
                        std::size_t budget) {
  if (min_degree(g_alpha) < d)
    throw std::invalid_argument("h1 check: min_degree(G_alpha) = " +
                                std::to_string(min_degree(g_alpha)) + " < d = " +
                                std::to_string(d));
  return h1_claim_check_union(graph_union(g_alpha, r1), d, rng, budget);
}

double binary_entropy(double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("binary_entropy: q outside [0, 1]");
  if (q == 0.0 || q == 1.0) return 0.0;
  return -q * std::log(q) - (1.0 - q) * std::log1p(-q);
}

}  // namespace perturb
