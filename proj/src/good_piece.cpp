#include "graphcake/good_piece.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <map>
#include <set>

#include "graphcake/errors.hpp"

namespace graphcake {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_family(const MetricGraph& g, const PieceFamily& family, bool require_closed) {
  if (family.members.empty()) throw InvalidInputError("empty piece family");
  for (const auto& m : family.members) {
    if (m.piece.empty()) throw InvalidInputError("family piece is empty");
    if (!piece_on_graph(g, m.piece)) throw InvalidInputError("family piece is not on the graph");
    if (!is_connected_piece(g, m.piece)) {
      throw InvalidInputError("family piece is not connected");
    }
    if (require_closed) {
      for (const IntervalOnEdge& iv : m.piece.intervals) {
        if (!iv.closed_start || !iv.closed_end) {
          throw InvalidInputError("family piece must be closed when s > 0");
        }
      }
    }
  }
}

int family_component(const MetricGraph& g, const ComponentMap& comps,
                     const PieceFamily& family) {
  int comp = comps.of_piece(g, family.members.front().piece);
  for (const auto& m : family.members) {
    if (comps.of_piece(g, m.piece) != comp) {
      throw InvalidInputError("family pieces live in different components");
    }
  }
  if (comp < 0) throw InvalidInputError("family piece is not on the graph");
  return comp;
}

// ---------------------------------------------------------------------------
// Leaf-edge induction for the 0-good selection. The component's live
// material is recast as a plain tree whose edges are live ranges and whose
// nodes are live vertices plus unattached range ends; the family maps onto
// it, and the induction peels leaf edges until a single edge remains.

struct SNodeKey {
  bool phantom = false;
  int a = 0, b = 0, c = 0;  // vertex id, or (edge, range, side)

  bool operator<(const SNodeKey& o) const {
    if (phantom != o.phantom) return !phantom;
    if (a != o.a) return a < o.a;
    if (b != o.b) return b < o.b;
    return c < o.c;
  }
};

struct STreeEdge {
  int node_a = -1;  // range.lo side
  int node_b = -1;  // range.hi side
  double len = 0.0;
  int edge_id = -1;
  int range = -1;
  bool active = true;
};

struct RPiece {
  std::map<int, Flagged> on_edge;  // s-edge index -> interval in s-edge coords
  std::set<int> nodes;             // covered s-nodes
};

struct STree {
  std::vector<SNodeKey> keys;
  std::vector<STreeEdge> edges;
  std::vector<std::vector<int>> incident;  // node -> s-edge indices
  std::vector<bool> node_active;

  int degree(int node) const {
    int d = 0;
    for (int e : incident[node]) {
      if (edges[e].active) ++d;
    }
    return d;
  }
  int active_edge_count() const {
    int m = 0;
    for (const auto& e : edges) m += e.active ? 1 : 0;
    return m;
  }
  int only_active_edge(int node) const {
    for (int e : incident[node]) {
      if (edges[e].active) return e;
    }
    return -1;
  }
};

struct EdgePresence {
  double r = -kInf;  // largest coordinate the piece reaches
  bool attained = false;
};

// Largest coordinate piece j reaches on s-edge e, with attainment. `flip`
// mirrors the edge so "right" can point toward either end.
EdgePresence rightmost(const STree& t, const RPiece& p, int e, bool flip) {
  const STreeEdge& ed = t.edges[e];
  EdgePresence out;
  auto offer = [&](double coord, bool att) {
    if (coord > out.r + kGeomTol) {
      out.r = coord;
      out.attained = att;
    } else if (approx_eq(coord, out.r)) {
      out.attained = out.attained || att;
    }
  };
  auto it = p.on_edge.find(e);
  if (it != p.on_edge.end()) {
    const Flagged& f = it->second;
    if (!flip) {
      offer(f.hi, f.closed_hi);
    } else {
      offer(ed.len - f.lo, f.closed_lo);
    }
  }
  if (p.nodes.count(ed.node_a)) offer(flip ? ed.len : 0.0, true);
  if (p.nodes.count(ed.node_b)) offer(flip ? 0.0 : ed.len, true);
  return out;
}

std::size_t pick_min_right(const std::vector<std::pair<std::size_t, EdgePresence>>& cands) {
  double best = kInf;
  for (const auto& [j, pres] : cands) best = std::min(best, pres.r);
  // Prefer a right-open piece among those at the minimal right endpoint,
  // then the lowest index.
  std::optional<std::size_t> open_pick, closed_pick;
  for (const auto& [j, pres] : cands) {
    if (!approx_eq(pres.r, best)) continue;
    if (!pres.attained && !open_pick) open_pick = j;
    if (pres.attained && !closed_pick) closed_pick = j;
  }
  if (open_pick) return *open_pick;
  return *closed_pick;
}

std::size_t solve_zero_good(STree& t, std::vector<RPiece>& pieces) {
  const int m = t.active_edge_count();
  if (m == 0) return 0;
  if (m == 1) {
    int e = -1;
    for (std::size_t i = 0; i < t.edges.size(); ++i) {
      if (t.edges[i].active) e = static_cast<int>(i);
    }
    std::vector<std::pair<std::size_t, EdgePresence>> cands;
    for (std::size_t j = 0; j < pieces.size(); ++j) {
      cands.emplace_back(j, rightmost(t, pieces[j], e, false));
    }
    return pick_min_right(cands);
  }

  // Peel the lexicographically smallest leaf.
  int leaf = -1;
  for (std::size_t n = 0; n < t.keys.size(); ++n) {
    if (!t.node_active[n] || t.degree(static_cast<int>(n)) != 1) continue;
    if (leaf < 0 || t.keys[n] < t.keys[leaf]) leaf = static_cast<int>(n);
  }
  if (leaf < 0) throw InternalCheckError("find_zero_good: tree without a leaf");
  const int e = t.only_active_edge(leaf);
  const STreeEdge& ed = t.edges[e];
  const int inner = (ed.node_a == leaf) ? ed.node_b : ed.node_a;

  // Case 1: some piece is contained in the leaf edge. Choose, among those,
  // one whose closest point to the inner vertex is as far away as possible;
  // prefer the piece open at its inner-nearest end.
  std::vector<std::pair<std::size_t, EdgePresence>> contained;
  for (std::size_t j = 0; j < pieces.size(); ++j) {
    const RPiece& p = pieces[j];
    bool inside = true;
    for (const auto& [se, f] : p.on_edge) {
      if (se != e) inside = false;
    }
    for (int n : p.nodes) {
      if (n != ed.node_a && n != ed.node_b) inside = false;
    }
    if (!inside) continue;
    // Distance to the inner vertex = len - rightmost coordinate when the
    // edge is oriented with the inner vertex at the far end; reuse
    // `rightmost` by flipping so that "right" points toward the leaf.
    contained.emplace_back(j, rightmost(t, p, e, ed.node_a == inner));
  }
  if (!contained.empty()) {
    // The flip above mirrors the edge so the inner vertex sits at the far
    // end; the piece's nearest point to it is then at distance len - r.
    // Maximize that distance; prefer the piece open at its inner-nearest
    // end, then the lowest index.
    double best = -kInf;
    for (auto& [j, pres] : contained) {
      pres.r = ed.len - pres.r;
      best = std::max(best, pres.r);
    }
    std::optional<std::size_t> open_pick, closed_pick;
    for (const auto& [j, pres] : contained) {
      if (!approx_eq(pres.r, best)) continue;
      if (!pres.attained && !open_pick) open_pick = j;
      if (pres.attained && !closed_pick) closed_pick = j;
    }
    return open_pick ? *open_pick : *closed_pick;
  }

  // Case 2: restrict to the tree without the leaf edge and recurse.
  t.edges[e].active = false;
  t.node_active[leaf] = false;
  for (RPiece& p : pieces) {
    p.on_edge.erase(e);
    p.nodes.erase(leaf);
    if (p.on_edge.empty() && p.nodes.empty()) {
      throw InternalCheckError("find_zero_good: piece vanished during induction");
    }
  }
  return solve_zero_good(t, pieces);
}

}  // namespace

bool is_zero_good(const MetricGraph& g, const PieceFamily& family, std::size_t j) {
  const Piece& star = family.members.at(j).piece;
  std::vector<std::size_t> touching;
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (i == j) continue;
    if (pieces_intersect(g, family.members[i].piece, star)) touching.push_back(i);
  }
  for (std::size_t a = 0; a < touching.size(); ++a) {
    for (std::size_t b = a + 1; b < touching.size(); ++b) {
      if (!pieces_intersect(g, family.members[touching[a]].piece,
                            family.members[touching[b]].piece)) {
        return false;
      }
    }
  }
  return true;
}

bool is_s_good(const MetricGraph& g, const PieceFamily& family, std::size_t j, double s) {
  if (!(s > 0.0)) throw InvalidInputError("is_s_good: s must be positive");
  const Piece& star = family.members.at(j).piece;
  std::vector<std::size_t> close;
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (i == j) continue;
    auto d = piece_distance(g, family.members[i].piece, star);
    if (d.finite && d.value < s - kGeomTol) close.push_back(i);
  }
  for (std::size_t a = 0; a < close.size(); ++a) {
    for (std::size_t b = a + 1; b < close.size(); ++b) {
      auto d = piece_distance(g, family.members[close[a]].piece,
                              family.members[close[b]].piece);
      if (!d.finite || d.value >= s - kGeomTol) return false;
    }
  }
  return true;
}

std::size_t find_zero_good(const MetricGraph& g, const PieceFamily& family) {
  validate_family(g, family, /*require_closed=*/false);
  ComponentMap comps(g);
  const int comp = family_component(g, comps, family);

  // Build the component's tree of live ranges.
  STree t;
  std::map<SNodeKey, int> node_ids;
  auto node_of = [&](const SNodeKey& key) {
    auto it = node_ids.find(key);
    if (it != node_ids.end()) return it->second;
    int id = static_cast<int>(t.keys.size());
    node_ids.emplace(key, id);
    t.keys.push_back(key);
    t.incident.emplace_back();
    t.node_active.push_back(true);
    return id;
  };
  for (int v : comps.component_vertices(comp)) {
    node_of(SNodeKey{false, v, 0, 0});
  }
  std::map<std::pair<int, int>, int> sedge_of_range;
  for (const EdgeRecord& e : g.edges()) {
    const auto& ranges = g.live_ranges(e.id);
    for (std::size_t ri = 0; ri < ranges.size(); ++ri) {
      PointRef probe = canonical_point(
          g, e.id, flagged_is_point(ranges[ri]) ? ranges[ri].lo
                                                : 0.5 * (ranges[ri].lo + ranges[ri].hi));
      if (comps.of_point(g, probe) != comp) continue;
      const Flagged& r = ranges[ri];
      int na, nb;
      if (approx_eq(r.lo, 0.0) && r.closed_lo && g.vertex_live(e.u)) {
        na = node_of(SNodeKey{false, e.u, 0, 0});
      } else {
        na = node_of(SNodeKey{true, e.id, static_cast<int>(ri), 0});
      }
      if (approx_eq(r.hi, e.length) && r.closed_hi && g.vertex_live(e.v)) {
        nb = node_of(SNodeKey{false, e.v, 0, 0});
      } else {
        nb = node_of(SNodeKey{true, e.id, static_cast<int>(ri), 1});
      }
      int se = static_cast<int>(t.edges.size());
      t.edges.push_back(STreeEdge{na, nb, r.hi - r.lo, e.id, static_cast<int>(ri), true});
      t.incident[na].push_back(se);
      t.incident[nb].push_back(se);
      sedge_of_range[{e.id, static_cast<int>(ri)}] = se;
    }
  }
  if (t.active_edge_count() != static_cast<int>(t.keys.size()) - 1) {
    throw InvalidInputError("find_zero_good: graph component is not a tree");
  }

  // Map family members onto the tree.
  std::vector<RPiece> pieces(family.size());
  for (std::size_t j = 0; j < family.size(); ++j) {
    const Piece& p = family.members[j].piece;
    for (const IntervalOnEdge& iv : p.intervals) {
      const EdgeRecord& e = g.edge(iv.edge);
      bool vertex_point = approx_eq(iv.start, iv.end) &&
                          (approx_eq(iv.start, 0.0) || approx_eq(iv.start, e.length));
      if (vertex_point) continue;  // covered by the vertex pass below
      const auto& ranges = g.live_ranges(iv.edge);
      int ri = -1;
      for (std::size_t k = 0; k < ranges.size(); ++k) {
        if (approx_le(ranges[k].lo, iv.start) && approx_le(iv.end, ranges[k].hi)) {
          ri = static_cast<int>(k);
          break;
        }
      }
      if (ri < 0) throw InvalidInputError("family piece is not on the graph");
      int se = sedge_of_range.at({iv.edge, ri});
      const Flagged& r = ranges[ri];
      Flagged f{iv.start - r.lo, iv.end - r.lo, iv.closed_start, iv.closed_end};
      // A phantom end is a missing limit point: nothing attaches there.
      if (t.keys[t.edges[se].node_a].phantom && approx_eq(f.lo, 0.0)) f.closed_lo = false;
      if (t.keys[t.edges[se].node_b].phantom && approx_eq(f.hi, t.edges[se].len)) {
        f.closed_hi = false;
      }
      if (!flagged_valid(f)) continue;
      auto it = pieces[j].on_edge.find(se);
      if (it == pieces[j].on_edge.end()) {
        pieces[j].on_edge.emplace(se, f);
      } else {
        auto u = flagged_union({it->second, f});
        if (u.size() != 1) {
          throw InvalidInputError("family piece is not connected within an edge");
        }
        it->second = u[0];
      }
    }
    for (int v : piece_vertices(g, p)) {
      auto it = node_ids.find(SNodeKey{false, v, 0, 0});
      if (it == node_ids.end()) {
        throw InvalidInputError("family piece covers a vertex outside its tree");
      }
      pieces[j].nodes.insert(it->second);
    }
    if (pieces[j].on_edge.empty() && pieces[j].nodes.empty()) {
      throw InvalidInputError("family piece is empty on the tree");
    }
  }

  return solve_zero_good(t, pieces);
}

std::pair<std::size_t, GoodPieceTrace> find_s_good(const MetricGraph& g,
                                                   const PieceFamily& family, double s,
                                                   std::optional<PointRef> root) {
  if (!(s > 0.0)) throw InvalidInputError("find_s_good: s must be positive");
  validate_family(g, family, /*require_closed=*/true);
  ComponentMap comps(g);
  const int comp = family_component(g, comps, family);

  PointRef r;
  if (root) {
    r = *root;
    if (!point_on_graph(g, r) || comps.of_point(g, r) != comp) {
      throw InvalidInputError("find_s_good: root is not in the family's tree");
    }
  } else {
    auto verts = comps.component_vertices(comp);
    if (!verts.empty()) {
      r = PointRef::at_vertex(verts.front());
    } else {
      // Vertex-free fragment: root at the midpoint of its lowest range.
      std::optional<std::pair<int, double>> best;
      for (const EdgeRecord& e : g.edges()) {
        for (const Flagged& rg : g.live_ranges(e.id)) {
          PointRef probe = canonical_point(g, e.id, 0.5 * (rg.lo + rg.hi));
          if (comps.of_point(g, probe) != comp) continue;
          if (!best || e.id < best->first) best = {e.id, 0.5 * (rg.lo + rg.hi)};
        }
      }
      if (!best) throw InternalCheckError("find_s_good: component has no material");
      r = canonical_point(g, best->first, best->second);
    }
  }

  GoodPieceTrace trace;
  trace.root = r;
  std::size_t best_j = 0;
  double best_d = -1.0;
  for (std::size_t j = 0; j < family.size(); ++j) {
    PointRef xj = nearest_in_piece_to_point(g, family.members[j].piece, r);
    auto dj = shortest_distance(g, xj, r);
    if (!dj.finite) throw InvalidInputError("find_s_good: piece unreachable from root");
    trace.projections.push_back(xj);
    trace.root_distances.push_back(dj.value);
    if (dj.value > best_d + kGeomTol) {
      best_d = dj.value;
      best_j = j;
    }
  }
  trace.chosen = best_j;

  const Piece& x0 = family.members[best_j].piece;
  const PointRef x0p = trace.projections[best_j];
  for (std::size_t j = 0; j < family.size(); ++j) {
    GoodPieceTrace::PairWitness w;
    if (j == best_j) {
      w.intersects_chosen = true;
    } else {
      w.intersects_chosen = pieces_intersect(g, family.members[j].piece, x0);
      if (!w.intersects_chosen) {
        PointRef yj = nearest_in_piece_to_piece(g, family.members[j].piece, x0);
        w.y = yj;
        Piece path = tree_path(g, x0p, yj);
        w.z = nearest_in_piece_to_point(g, path, r);
      }
    }
    trace.pairs.push_back(std::move(w));
  }
  return {best_j, std::move(trace)};
}

}  // namespace graphcake
