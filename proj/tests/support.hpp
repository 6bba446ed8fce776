#pragma once

// Shared test scaffolding: deterministic random instance builders and the
// brute-force sampling oracles the unit and acceptance suites check against.

#include <algorithm>
#include <optional>
#include <random>
#include <vector>

#include "graphcake/metric_graph.hpp"

namespace gctest {

using namespace graphcake;

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// Rounds to 3 decimals so instances stay at "short decimal literal" scale.
inline double round3(double x) { return std::round(x * 1000.0) / 1000.0; }

// Random tree with `n` vertices (ids 0..n-1), random attachment, lengths in
// [0.5, 2] rounded to 3 decimals.
inline MetricGraph random_tree(Rng& rng, int n) {
  std::vector<int> verts(n);
  for (int i = 0; i < n; ++i) verts[i] = i;
  std::vector<EdgeRecord> edges;
  for (int i = 1; i < n; ++i) {
    int parent = uniform_int(rng, 0, i - 1);
    edges.push_back(EdgeRecord{i - 1, parent, i, round3(uniform(rng, 0.5, 2.0))});
  }
  return MetricGraph(verts, edges);
}

// Random forest: `trees` trees with `n` vertices in total.
inline MetricGraph random_forest(Rng& rng, int trees, int n) {
  trees = std::min(trees, n);
  std::vector<int> verts(n);
  for (int i = 0; i < n; ++i) verts[i] = i;
  std::vector<EdgeRecord> edges;
  // First vertex of each tree has no parent.
  std::vector<int> roots;
  for (int t = 0; t < trees; ++t) roots.push_back(t);
  int eid = 0;
  for (int i = trees; i < n; ++i) {
    int tree = uniform_int(rng, 0, trees - 1);
    // Attach to any earlier vertex of that tree: approximate by re-rolling.
    int parent;
    do {
      parent = uniform_int(rng, 0, i - 1);
    } while (parent >= trees && parent % trees != tree % trees && uniform_int(rng, 0, 2));
    edges.push_back(EdgeRecord{eid++, parent, i, round3(uniform(rng, 0.5, 2.0))});
  }
  return MetricGraph(verts, edges);
}

// Random graph: tree plus `extra` additional edges (circuit rank == extra,
// so fvs <= extra). Lengths at least `min_len`.
inline MetricGraph random_graph_with_cycles(Rng& rng, int n, int extra,
                                            double min_len = 0.5) {
  std::vector<int> verts(n);
  for (int i = 0; i < n; ++i) verts[i] = i;
  std::vector<EdgeRecord> edges;
  int eid = 0;
  for (int i = 1; i < n; ++i) {
    int parent = uniform_int(rng, 0, i - 1);
    edges.push_back(EdgeRecord{eid++, parent, i, round3(uniform(rng, min_len, min_len + 1.5))});
  }
  for (int x = 0; x < extra && n >= 2; ++x) {
    int a = uniform_int(rng, 0, n - 1);
    int b = uniform_int(rng, 0, n - 1);
    if (a == b) b = (b + 1) % n;
    edges.push_back(EdgeRecord{eid++, a, b, round3(uniform(rng, min_len, min_len + 1.5))});
  }
  return MetricGraph(verts, edges);
}

// Random live point of g, uniform over total live length.
inline PointRef random_point(Rng& rng, const MetricGraph& g) {
  std::vector<std::pair<int, Flagged>> ranges;
  double total = 0.0;
  for (const EdgeRecord& e : g.edges()) {
    for (const Flagged& r : g.live_ranges(e.id)) {
      ranges.emplace_back(e.id, r);
      total += r.hi - r.lo;
    }
  }
  if (ranges.empty() || total <= 0.0) {
    auto vs = g.live_vertices();
    return PointRef::at_vertex(vs.at(static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(vs.size()) - 1))));
  }
  double t = uniform(rng, 0.0, total);
  for (const auto& [eid, r] : ranges) {
    double len = r.hi - r.lo;
    if (t <= len) {
      double off = std::clamp(r.lo + t, r.lo, r.hi);
      if (!flagged_contains(r, off)) off = 0.5 * (r.lo + r.hi);
      return canonical_point(g, eid, off);
    }
    t -= len;
  }
  return canonical_point(g, ranges.back().first, 0.5 * (ranges.back().second.lo + ranges.back().second.hi));
}

// Random closed connected piece: ball of random radius around a random
// point (via tree_path-free construction: the closed s-neighborhood).
inline Piece random_closed_connected_piece(Rng& rng, const MetricGraph& g,
                                           double max_radius = 0.8) {
  PointRef c = random_point(rng, g);
  double rad = uniform(rng, 0.05, max_radius);
  Piece seed = piece_from_point(g, c);
  return closure(s_neighborhood(g, seed, rad));
}

// Random connected piece with random open/closed flags: a single interval
// on one edge, or a closed ball.
inline Piece random_flagged_piece(Rng& rng, const MetricGraph& g) {
  if (uniform_int(rng, 0, 1) == 0) return random_closed_connected_piece(rng, g);
  const auto& edges = g.edges();
  const EdgeRecord& e = edges[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(edges.size()) - 1))];
  double a = uniform(rng, 0.0, e.length);
  double b = uniform(rng, 0.0, e.length);
  if (a > b) std::swap(a, b);
  if (approx_eq(a, b)) {
    return make_piece(g, {IntervalOnEdge{e.id, a, b, true, true}});
  }
  return make_piece(g, {IntervalOnEdge{e.id, a, b, uniform_int(rng, 0, 1) == 0,
                                       uniform_int(rng, 0, 1) == 0}});
}

// Membership-sampling oracle: dense probe offsets on an edge.
inline std::vector<double> probe_offsets(const MetricGraph& g, int edge, int n = 200) {
  const EdgeRecord& e = g.edge(edge);
  std::vector<double> out;
  for (int i = 0; i <= n; ++i) out.push_back(e.length * i / n);
  return out;
}

}  // namespace gctest
