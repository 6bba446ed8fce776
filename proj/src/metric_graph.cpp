#include "graphcake/metric_graph.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <sstream>

#include "aux_graph.hpp"
#include "graphcake/errors.hpp"

namespace graphcake {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// Degenerate interval sitting exactly on a vertex, if any.
std::optional<int> interval_vertex_point(const MetricGraph& g, const IntervalOnEdge& iv) {
  if (!approx_eq(iv.start, iv.end)) return std::nullopt;
  const EdgeRecord& e = g.edge(iv.edge);
  if (approx_eq(iv.start, 0.0)) return e.u;
  if (approx_eq(iv.start, e.length)) return e.v;
  return std::nullopt;
}

}  // namespace

double Piece::total_length() const {
  double sum = 0.0;
  for (const IntervalOnEdge& iv : intervals) sum += iv.length();
  return sum;
}

MetricGraph::MetricGraph(std::vector<int> vertex_ids, std::vector<EdgeRecord> edges)
    : vertex_ids_(std::move(vertex_ids)), edges_(std::move(edges)) {
  std::sort(vertex_ids_.begin(), vertex_ids_.end());
  if (std::adjacent_find(vertex_ids_.begin(), vertex_ids_.end()) != vertex_ids_.end()) {
    throw InvalidInputError("duplicate vertex id");
  }
  std::set<int> edge_ids;
  for (const EdgeRecord& e : edges_) {
    if (!(e.length > 0.0)) {
      throw InvalidInputError("edge " + std::to_string(e.id) + " has non-positive length");
    }
    if (!has_vertex(e.u) || !has_vertex(e.v)) {
      throw InvalidInputError("edge " + std::to_string(e.id) + " references unknown vertex");
    }
    if (!edge_ids.insert(e.id).second) {
      throw InvalidInputError("duplicate edge id " + std::to_string(e.id));
    }
  }
  live_.resize(edges_.size());
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    live_[i] = {Flagged{0.0, edges_[i].length, true, true}};
  }
}

bool MetricGraph::has_vertex(int v) const {
  return std::binary_search(vertex_ids_.begin(), vertex_ids_.end(), v);
}

bool MetricGraph::has_edge(int e) const { return edge_index(e) >= 0; }

bool MetricGraph::vertex_live(int v) const {
  return has_vertex(v) && !deleted_.count(v);
}

int MetricGraph::edge_index(int e) const {
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (edges_[i].id == e) return static_cast<int>(i);
  }
  return -1;
}

const EdgeRecord& MetricGraph::edge(int e) const {
  int i = edge_index(e);
  if (i < 0) throw InvalidInputError("unknown edge id " + std::to_string(e));
  return edges_[i];
}

const std::vector<Flagged>& MetricGraph::live_ranges(int e) const {
  int i = edge_index(e);
  if (i < 0) throw InvalidInputError("unknown edge id " + std::to_string(e));
  return live_[i];
}

std::vector<int> MetricGraph::live_vertices() const {
  std::vector<int> out;
  for (int v : vertex_ids_) {
    if (!deleted_.count(v)) out.push_back(v);
  }
  return out;
}

std::vector<int> MetricGraph::incident_edges(int v) const {
  std::vector<int> out;
  for (const EdgeRecord& e : edges_) {
    if (e.u == v || e.v == v) out.push_back(e.id);
  }
  return out;
}

bool MetricGraph::fully_live() const {
  if (!deleted_.empty()) return false;
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (live_[i].size() != 1) return false;
    const Flagged& r = live_[i][0];
    if (!approx_eq(r.lo, 0.0) || !approx_eq(r.hi, edges_[i].length) || !r.closed_lo ||
        !r.closed_hi) {
      return false;
    }
  }
  return true;
}

MetricGraph MetricGraph::with_deleted_vertices(const std::vector<int>& vs) const {
  return graphcake::delete_vertices(*this, vs);
}

MetricGraph MetricGraph::with_subtracted(const Piece& piece) const {
  return graphcake::subtract(*this, piece);
}

// --- points ------------------------------------------------------------

PointRef canonical_point(const MetricGraph& g, int edge, double offset) {
  const EdgeRecord& e = g.edge(edge);
  if (approx_eq(offset, 0.0)) return PointRef::at_vertex(e.u);
  if (approx_eq(offset, e.length)) return PointRef::at_vertex(e.v);
  if (offset < 0.0 || offset > e.length) {
    throw InvalidInputError("offset outside edge " + std::to_string(edge));
  }
  return PointRef::interior(edge, offset);
}

bool points_equal(const MetricGraph& g, const PointRef& a, const PointRef& b) {
  PointRef ca = a.is_vertex() ? a : canonical_point(g, a.edge, a.offset);
  PointRef cb = b.is_vertex() ? b : canonical_point(g, b.edge, b.offset);
  if (ca.is_vertex() != cb.is_vertex()) return false;
  if (ca.is_vertex()) return ca.vertex == cb.vertex;
  return ca.edge == cb.edge && approx_eq(ca.offset, cb.offset);
}

std::string point_to_string(const PointRef& p) {
  std::ostringstream os;
  if (p.is_vertex()) {
    os << "v" << p.vertex;
  } else {
    os << "(e" << p.edge << "," << p.offset << ")";
  }
  return os.str();
}

bool point_on_graph(const MetricGraph& g, const PointRef& p) {
  if (p.is_vertex()) return g.vertex_live(p.vertex);
  if (!g.has_edge(p.edge)) return false;
  const EdgeRecord& e = g.edge(p.edge);
  if (approx_eq(p.offset, 0.0)) return g.vertex_live(e.u);
  if (approx_eq(p.offset, e.length)) return g.vertex_live(e.v);
  for (const Flagged& r : g.live_ranges(p.edge)) {
    if (flagged_contains(r, p.offset)) return true;
  }
  return false;
}

// --- piece construction -------------------------------------------------

namespace {

// Canonical representation slot for a single-vertex piece: lowest incident
// edge id, at whichever end the vertex sits.
IntervalOnEdge vertex_slot(const MetricGraph& g, int v) {
  std::vector<int> inc = g.incident_edges(v);
  if (inc.empty()) {
    throw InvalidInputError("vertex " + std::to_string(v) +
                            " has no incident edge to host a point piece");
  }
  int e = *std::min_element(inc.begin(), inc.end());
  const EdgeRecord& rec = g.edge(e);
  double off = (rec.u == v) ? 0.0 : rec.length;
  return IntervalOnEdge{e, off, off, true, true};
}

}  // namespace

Piece make_piece(const MetricGraph& g, std::vector<IntervalOnEdge> raw) {
  std::map<int, std::vector<Flagged>> per_edge;
  std::set<int> point_vertices;
  for (IntervalOnEdge& iv : raw) {
    const EdgeRecord& e = g.edge(iv.edge);
    if (iv.start < -kGeomTol || iv.end > e.length + kGeomTol || iv.start > iv.end + kGeomTol) {
      throw InvalidInputError("interval outside edge " + std::to_string(iv.edge));
    }
    iv.start = std::clamp(iv.start, 0.0, e.length);
    iv.end = std::clamp(iv.end, 0.0, e.length);
    if (approx_eq(iv.start, iv.end) && !(iv.closed_start && iv.closed_end)) {
      throw InvalidInputError("degenerate interval must be closed at both ends");
    }
    if (approx_eq(iv.start, iv.end)) {
      // Vertex-degenerate intervals normalize to a canonical slot below.
      if (approx_eq(iv.start, 0.0)) {
        point_vertices.insert(e.u);
        continue;
      }
      if (approx_eq(iv.start, e.length)) {
        point_vertices.insert(e.v);
        continue;
      }
    }
    per_edge[iv.edge].push_back(iv.flags());
  }

  Piece out;
  for (auto& [eid, parts] : per_edge) {
    for (const Flagged& f : flagged_union(std::move(parts))) {
      out.intervals.push_back(IntervalOnEdge{eid, f.lo, f.hi, f.closed_lo, f.closed_hi});
    }
  }
  // A vertex point is redundant when another interval already reaches it
  // with a closed end.
  for (int v : point_vertices) {
    if (!piece_covers_vertex(g, out, v)) {
      IntervalOnEdge slot = vertex_slot(g, v);
      std::vector<Flagged> parts;
      for (const IntervalOnEdge& iv : out.intervals) {
        if (iv.edge == slot.edge) parts.push_back(iv.flags());
      }
      parts.push_back(slot.flags());
      std::erase_if(out.intervals,
                    [&](const IntervalOnEdge& iv) { return iv.edge == slot.edge; });
      for (const Flagged& f : flagged_union(std::move(parts))) {
        out.intervals.push_back(
            IntervalOnEdge{slot.edge, f.lo, f.hi, f.closed_lo, f.closed_hi});
      }
    }
  }
  std::sort(out.intervals.begin(), out.intervals.end(),
            [](const IntervalOnEdge& a, const IntervalOnEdge& b) {
              if (a.edge != b.edge) return a.edge < b.edge;
              return a.start < b.start;
            });
  return out;
}

Piece piece_from_point(const MetricGraph& g, const PointRef& p) {
  if (p.is_vertex()) return make_piece(g, {vertex_slot(g, p.vertex)});
  return make_piece(g, {IntervalOnEdge{p.edge, p.offset, p.offset, true, true}});
}

Piece closure(const Piece& piece) {
  Piece out = piece;
  for (IntervalOnEdge& iv : out.intervals) {
    iv.closed_start = true;
    iv.closed_end = true;
  }
  return out;
}

Piece whole_graph_piece(const MetricGraph& g) {
  Piece out;
  for (const EdgeRecord& e : g.edges()) {
    for (const Flagged& r : g.live_ranges(e.id)) {
      out.intervals.push_back(IntervalOnEdge{e.id, r.lo, r.hi, r.closed_lo, r.closed_hi});
    }
  }
  return out;
}

// --- piece predicates ----------------------------------------------------

bool piece_covers_vertex(const MetricGraph& g, const Piece& piece, int v) {
  for (const IntervalOnEdge& iv : piece.intervals) {
    const EdgeRecord& e = g.edge(iv.edge);
    if (e.u == v && approx_eq(iv.start, 0.0) && iv.closed_start) return true;
    if (e.v == v && approx_eq(iv.end, e.length) && iv.closed_end) return true;
  }
  return false;
}

std::set<int> piece_vertices(const MetricGraph& g, const Piece& piece) {
  std::set<int> out;
  for (const IntervalOnEdge& iv : piece.intervals) {
    const EdgeRecord& e = g.edge(iv.edge);
    if (approx_eq(iv.start, 0.0) && iv.closed_start) out.insert(e.u);
    if (approx_eq(iv.end, e.length) && iv.closed_end) out.insert(e.v);
  }
  return out;
}

bool piece_contains_point(const MetricGraph& g, const Piece& piece, const PointRef& p) {
  PointRef c = p.is_vertex() ? p : canonical_point(g, p.edge, p.offset);
  if (c.is_vertex()) return piece_covers_vertex(g, piece, c.vertex);
  for (const IntervalOnEdge& iv : piece.intervals) {
    if (iv.edge == c.edge && flagged_contains(iv.flags(), c.offset)) return true;
  }
  return false;
}

bool piece_on_graph(const MetricGraph& g, const Piece& piece) {
  for (const IntervalOnEdge& iv : piece.intervals) {
    if (!g.has_edge(iv.edge)) return false;
    if (auto v = interval_vertex_point(g, iv)) {
      if (!g.vertex_live(*v)) return false;
      continue;
    }
    const EdgeRecord& e = g.edge(iv.edge);
    bool located = false;
    for (const Flagged& r : g.live_ranges(iv.edge)) {
      if (!approx_le(r.lo, iv.start) || !approx_le(iv.end, r.hi)) continue;
      located = true;
      // A closed interval end needs the point to exist: either the range is
      // closed there, or the end is a live vertex.
      if (approx_eq(iv.start, r.lo) && iv.closed_start && !r.closed_lo) {
        bool vertex_end = approx_eq(iv.start, 0.0) && g.vertex_live(e.u);
        if (!vertex_end) located = false;
      }
      if (approx_eq(iv.end, r.hi) && iv.closed_end && !r.closed_hi) {
        bool vertex_end = approx_eq(iv.end, e.length) && g.vertex_live(e.v);
        if (!vertex_end) located = false;
      }
      if (located) break;
    }
    if (!located) return false;
  }
  return true;
}

bool pieces_intersect(const MetricGraph& g, const Piece& a, const Piece& b) {
  for (const IntervalOnEdge& x : a.intervals) {
    for (const IntervalOnEdge& y : b.intervals) {
      if (x.edge == y.edge && flagged_overlap(x.flags(), y.flags())) return true;
    }
  }
  std::set<int> va = piece_vertices(g, a);
  for (int v : piece_vertices(g, b)) {
    if (va.count(v)) return true;
  }
  return false;
}

bool pieces_overlap_positively(const MetricGraph& g, const Piece& a, const Piece& b) {
  (void)g;
  for (const IntervalOnEdge& x : a.intervals) {
    for (const IntervalOnEdge& y : b.intervals) {
      if (x.edge != y.edge) continue;
      double lo = std::max(x.start, y.start);
      double hi = std::min(x.end, y.end);
      if (approx_lt(lo, hi)) return true;
    }
  }
  return false;
}

bool piece_contains(const MetricGraph& g, const Piece& outer, const Piece& inner) {
  for (int v : piece_vertices(g, inner)) {
    if (!piece_covers_vertex(g, outer, v)) return false;
  }
  for (const IntervalOnEdge& iv : inner.intervals) {
    if (auto v = interval_vertex_point(g, iv)) {
      continue;  // vertex coverage checked above
    }
    Flagged want = iv.flags();
    const EdgeRecord& e = g.edge(iv.edge);
    // An end claimed at a vertex the outer piece covers elsewhere does not
    // need same-edge material.
    if (approx_eq(want.lo, 0.0) && want.closed_lo && piece_covers_vertex(g, outer, e.u)) {
      want.closed_lo = false;
    }
    if (approx_eq(want.hi, e.length) && want.closed_hi &&
        piece_covers_vertex(g, outer, e.v)) {
      want.closed_hi = false;
    }
    if (flagged_is_point(want) && !(want.closed_lo && want.closed_hi)) continue;
    bool covered = false;
    for (const IntervalOnEdge& ov : outer.intervals) {
      if (ov.edge == iv.edge && flagged_covers(ov.flags(), want)) {
        covered = true;
        break;
      }
    }
    if (!covered) return false;
  }
  return true;
}

Piece piece_union(const MetricGraph& g, const Piece& a, const Piece& b) {
  std::vector<IntervalOnEdge> all = a.intervals;
  all.insert(all.end(), b.intervals.begin(), b.intervals.end());
  return make_piece(g, std::move(all));
}

// --- distance operations --------------------------------------------------

namespace {

std::vector<std::pair<int, double>> piece_extras(const Piece& p) {
  std::vector<std::pair<int, double>> out;
  for (const IntervalOnEdge& iv : p.intervals) {
    out.emplace_back(iv.edge, iv.start);
    out.emplace_back(iv.edge, iv.end);
  }
  return out;
}

void append_point_extra(std::vector<std::pair<int, double>>& extras, const PointRef& p) {
  if (!p.is_vertex()) extras.emplace_back(p.edge, p.offset);
}

PointRef node_point(const MetricGraph& g, const detail::AuxGraph& aux, int node) {
  if (aux.is_vertex_node(node)) return PointRef::at_vertex(aux.vertex_of(node));
  const auto& st = aux.station_of(node);
  return canonical_point(g, st.edge, st.offset);
}

}  // namespace

GraphDistance shortest_distance(const MetricGraph& g, const PointRef& p, const PointRef& q) {
  if (!point_on_graph(g, p) || !point_on_graph(g, q)) {
    throw InvalidInputError("point is not on the graph");
  }
  if (points_equal(g, p, q)) return GraphDistance::of(0.0);
  std::vector<std::pair<int, double>> extras;
  append_point_extra(extras, p);
  append_point_extra(extras, q);
  detail::AuxGraph aux(g, extras);
  int a = aux.node_of_point(p);
  int b = aux.node_of_point(q);
  if (a < 0 || b < 0) throw InvalidInputError("point is not on the graph");
  std::vector<int> src{a};
  auto dist = aux.dijkstra(src);
  if (dist[b] == kInf) return GraphDistance::infinite();
  return GraphDistance::of(dist[b]);
}

GraphDistance piece_distance(const MetricGraph& g, const Piece& a, const Piece& b) {
  if (a.empty() || b.empty()) throw InvalidInputError("piece_distance: empty piece");
  if (pieces_intersect(g, a, b)) return GraphDistance::of(0.0);
  std::vector<std::pair<int, double>> extras = piece_extras(a);
  auto eb = piece_extras(b);
  extras.insert(extras.end(), eb.begin(), eb.end());
  detail::AuxGraph aux(g, extras);
  auto src = aux.piece_nodes(a);
  if (src.empty()) throw InvalidInputError("piece_distance: piece is not on the graph");
  auto dist = aux.dijkstra(src);
  double best = kInf;
  for (int t : aux.piece_nodes(b)) best = std::min(best, dist[t]);
  if (best == kInf) return GraphDistance::infinite();
  return GraphDistance::of(best);
}

bool is_connected_piece(const MetricGraph& g, const Piece& piece) {
  if (piece.empty()) return true;  // empty piece is connected by convention
  const std::size_t n = piece.intervals.size();
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  std::map<int, std::vector<std::size_t>> at_vertex;
  for (std::size_t i = 0; i < n; ++i) {
    const IntervalOnEdge& iv = piece.intervals[i];
    const EdgeRecord& e = g.edge(iv.edge);
    if (approx_eq(iv.start, 0.0) && iv.closed_start) at_vertex[e.u].push_back(i);
    if (approx_eq(iv.end, e.length) && iv.closed_end) at_vertex[e.v].push_back(i);
  }
  for (const auto& [v, ids] : at_vertex) {
    for (std::size_t k = 1; k < ids.size(); ++k) {
      parent[find(ids[k])] = find(ids[0]);
    }
  }
  std::size_t root = find(0);
  for (std::size_t i = 1; i < n; ++i) {
    if (find(i) != root) return false;
  }
  return true;
}

bool is_acyclic(const MetricGraph& g) { return circuit_rank(g) == 0; }

int circuit_rank(const MetricGraph& g) {
  detail::AuxGraph aux(g, {});
  return aux.circuit_rank();
}

Piece tree_path(const MetricGraph& g, const PointRef& p, const PointRef& q) {
  if (!point_on_graph(g, p) || !point_on_graph(g, q)) {
    throw InvalidInputError("point is not on the graph");
  }
  if (!is_acyclic(g)) throw InvalidInputError("tree_path: graph is not a forest");
  if (points_equal(g, p, q)) return piece_from_point(g, p);
  std::vector<std::pair<int, double>> extras;
  append_point_extra(extras, p);
  append_point_extra(extras, q);
  detail::AuxGraph aux(g, extras);
  int a = aux.node_of_point(p);
  int b = aux.node_of_point(q);
  if (a < 0 || b < 0) throw InvalidInputError("point is not on the graph");
  std::vector<int> pred;
  std::vector<int> src{a};
  auto dist = aux.dijkstra(src, &pred);
  if (dist[b] == kInf) throw InvalidInputError("tree_path: points are in different components");
  std::vector<IntervalOnEdge> parts;
  for (int cur = b; cur != a; cur = pred[cur]) {
    int prev = pred[cur];
    if (!aux.is_vertex_node(cur) && !aux.is_vertex_node(prev)) {
      const auto& s1 = aux.station_of(cur);
      const auto& s2 = aux.station_of(prev);
      if (s1.edge == s2.edge && s1.range == s2.range && !approx_eq(s1.offset, s2.offset)) {
        parts.push_back(IntervalOnEdge{s1.edge, std::min(s1.offset, s2.offset),
                                       std::max(s1.offset, s2.offset), true, true});
      }
    }
  }
  if (parts.empty()) return piece_from_point(g, p);
  return make_piece(g, std::move(parts));
}

namespace {

void require_closed_connected(const MetricGraph& g, const Piece& x, const char* who) {
  if (x.empty()) throw InvalidInputError(std::string(who) + ": empty piece");
  for (const IntervalOnEdge& iv : x.intervals) {
    if (!iv.closed_start || !iv.closed_end) {
      throw InvalidInputError(std::string(who) + ": piece must be closed");
    }
  }
  if (!piece_on_graph(g, x)) {
    throw InvalidInputError(std::string(who) + ": piece is not on the graph");
  }
  if (!is_connected_piece(g, x)) {
    throw InvalidInputError(std::string(who) + ": piece must be connected");
  }
}

PointRef first_point(const MetricGraph& g, const Piece& x) {
  const IntervalOnEdge& iv = x.intervals.front();
  return canonical_point(g, iv.edge, iv.start);
}

bool node_in_piece(const MetricGraph& g, const detail::AuxGraph& aux, const Piece& x,
                   int node) {
  if (aux.is_vertex_node(node)) return piece_covers_vertex(g, x, aux.vertex_of(node));
  const auto& st = aux.station_of(node);
  for (const IntervalOnEdge& iv : x.intervals) {
    if (iv.edge == st.edge && flagged_contains(iv.flags(), st.offset)) return true;
  }
  return false;
}

}  // namespace

PointRef nearest_in_piece_to_point(const MetricGraph& g, const Piece& x, const PointRef& r) {
  require_closed_connected(g, x, "nearest_in_piece_to_point");
  if (!point_on_graph(g, r)) throw InvalidInputError("point is not on the graph");
  if (!is_acyclic(g)) throw InvalidInputError("nearest: graph is not a forest");
  if (piece_contains_point(g, x, r)) {
    return r.is_vertex() ? r : canonical_point(g, r.edge, r.offset);
  }
  std::vector<std::pair<int, double>> extras = piece_extras(x);
  append_point_extra(extras, r);
  detail::AuxGraph aux(g, extras);
  int rn = aux.node_of_point(r);
  if (rn < 0) throw InvalidInputError("point is not on the graph");
  PointRef y0 = first_point(g, x);
  int y0n = aux.node_of_point(y0);
  if (y0n < 0) throw InvalidInputError("piece is not on the graph");
  std::vector<int> pred;
  std::vector<int> src{rn};
  auto dist = aux.dijkstra(src, &pred);
  if (dist[y0n] == kInf) {
    throw InvalidInputError("nearest: piece and point are in different components");
  }
  // Walk from y0 toward r; the prefix inside X ends at the projection.
  int best = y0n;
  for (int cur = pred[y0n]; cur >= 0; cur = pred[cur]) {
    if (!node_in_piece(g, aux, x, cur)) break;
    best = cur;
  }
  return node_point(g, aux, best);
}

PointRef nearest_in_piece_to_piece(const MetricGraph& g, const Piece& x, const Piece& r) {
  require_closed_connected(g, x, "nearest_in_piece_to_piece");
  require_closed_connected(g, r, "nearest_in_piece_to_piece");
  if (pieces_intersect(g, x, r)) {
    throw InvalidInputError("nearest_in_piece_to_piece: pieces overlap");
  }
  return nearest_in_piece_to_point(g, x, first_point(g, r));
}

Piece s_neighborhood(const MetricGraph& g, const Piece& a, double s) {
  if (a.empty()) throw InvalidInputError("s_neighborhood: empty piece");
  if (!(s > 0.0)) throw InvalidInputError("s_neighborhood: s must be positive");
  detail::AuxGraph aux(g, piece_extras(a));
  auto src = aux.piece_nodes(a);
  if (src.empty()) throw InvalidInputError("s_neighborhood: piece is not on the graph");
  auto dist = aux.dijkstra(src);
  std::vector<IntervalOnEdge> parts = a.intervals;
  for (const auto& seg : aux.segments()) {
    const Flagged& range = g.live_ranges(seg.edge)[seg.range];
    const double da = dist[seg.node_a];
    const double db = dist[seg.node_b];
    const bool mat_a = approx_eq(seg.off_a, range.lo) ? range.closed_lo : true;
    const bool mat_b = approx_eq(seg.off_b, range.hi) ? range.closed_hi : true;
    if (da < s) {
      double cut = seg.off_a + (s - da);
      if (cut >= seg.off_b - kGeomTol) {
        bool hi_closed = db < s && mat_b;
        parts.push_back(IntervalOnEdge{seg.edge, seg.off_a, seg.off_b, mat_a, hi_closed});
      } else {
        parts.push_back(IntervalOnEdge{seg.edge, seg.off_a, cut, mat_a, false});
      }
    }
    if (db < s) {
      double cut = seg.off_b - (s - db);
      if (cut <= seg.off_a + kGeomTol) {
        bool lo_closed = da < s && mat_a;
        parts.push_back(IntervalOnEdge{seg.edge, seg.off_a, seg.off_b, lo_closed, mat_b});
      } else {
        parts.push_back(IntervalOnEdge{seg.edge, cut, seg.off_b, false, mat_b});
      }
    }
  }
  // Covered vertices whose surrounding material is detached still belong to
  // the neighborhood.
  for (int v : g.live_vertices()) {
    int vn = aux.vertex_node(v);
    if (vn >= 0 && dist[vn] < s && !g.incident_edges(v).empty()) {
      Piece tmp;
      tmp.intervals = parts;
      if (!piece_covers_vertex(g, tmp, v)) parts.push_back(vertex_slot(g, v));
    }
  }
  return make_piece(g, std::move(parts));
}

// --- surgery ---------------------------------------------------------------

namespace {

void open_ranges_at_vertex(MetricGraph& out, std::vector<std::vector<Flagged>>& live,
                           const std::vector<EdgeRecord>& edges, int v) {
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const EdgeRecord& e = edges[i];
    for (Flagged& r : live[i]) {
      if (e.u == v && approx_eq(r.lo, 0.0)) r.closed_lo = false;
      if (e.v == v && approx_eq(r.hi, e.length)) r.closed_hi = false;
    }
    std::erase_if(live[i], [](const Flagged& r) { return !flagged_valid(r); });
  }
  (void)out;
}

void drop_vertex_end_points(std::vector<std::vector<Flagged>>& live,
                            const std::vector<EdgeRecord>& edges) {
  for (std::size_t i = 0; i < edges.size(); ++i) {
    std::erase_if(live[i], [&](const Flagged& r) {
      if (!approx_eq(r.lo, r.hi)) return false;
      return approx_eq(r.lo, 0.0) || approx_eq(r.lo, edges[i].length);
    });
  }
}

}  // namespace

MetricGraph subtract(const MetricGraph& g, const Piece& piece) {
  MetricGraph out = g;
  for (std::size_t i = 0; i < out.edges_.size(); ++i) {
    std::vector<Flagged> cuts;
    for (const IntervalOnEdge& iv : piece.intervals) {
      if (iv.edge == out.edges_[i].id) cuts.push_back(iv.flags());
    }
    if (!cuts.empty()) out.live_[i] = flagged_subtract(out.live_[i], cuts);
  }
  for (int v : piece_vertices(g, piece)) {
    if (out.vertex_live(v)) {
      out.deleted_.insert(v);
      open_ranges_at_vertex(out, out.live_, out.edges_, v);
    }
  }
  drop_vertex_end_points(out.live_, out.edges_);
  return out;
}

MetricGraph delete_vertices(const MetricGraph& g, const std::vector<int>& vs) {
  MetricGraph out = g;
  for (int v : vs) {
    if (!g.has_vertex(v)) throw InvalidInputError("unknown vertex " + std::to_string(v));
    out.deleted_.insert(v);
    open_ranges_at_vertex(out, out.live_, out.edges_, v);
  }
  drop_vertex_end_points(out.live_, out.edges_);
  return out;
}

std::vector<int> fvs(const MetricGraph& g) {
  if (is_acyclic(g)) return {};
  std::vector<int> verts = g.live_vertices();
  const int n = static_cast<int>(verts.size());
  for (int k = 1; k <= n; ++k) {
    // k-subsets in lexicographic order over the sorted vertex ids.
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      std::vector<int> cand(k);
      for (int i = 0; i < k; ++i) cand[i] = verts[idx[i]];
      if (is_acyclic(delete_vertices(g, cand))) return cand;
      int i = k - 1;
      while (i >= 0 && idx[i] == n - k + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  throw InternalCheckError("fvs: exhausted all vertex subsets");
}

// --- components ------------------------------------------------------------

ComponentMap::ComponentMap(const MetricGraph& g) {
  detail::AuxGraph aux(g, {});
  count_ = aux.component_count();
  for (int v : g.live_vertices()) {
    vertex_comp_.emplace_back(v, aux.component_of(aux.vertex_node(v)));
  }
  for (const EdgeRecord& e : g.edges()) {
    const auto& ranges = g.live_ranges(e.id);
    for (std::size_t ri = 0; ri < ranges.size(); ++ri) {
      int node = aux.station_node(e.id, static_cast<int>(ri), ranges[ri].lo);
      range_comp_.push_back({{e.id, static_cast<int>(ri)}, aux.component_of(node)});
    }
  }
}

int ComponentMap::of_vertex(int v) const {
  for (const auto& [vv, c] : vertex_comp_) {
    if (vv == v) return c;
  }
  return -1;
}

int ComponentMap::of_point(const MetricGraph& g, const PointRef& p) const {
  PointRef c = p.is_vertex() ? p : canonical_point(g, p.edge, p.offset);
  if (c.is_vertex()) return of_vertex(c.vertex);
  const auto& ranges = g.live_ranges(c.edge);
  for (std::size_t ri = 0; ri < ranges.size(); ++ri) {
    if (flagged_contains(ranges[ri], c.offset)) {
      for (const auto& [key, comp] : range_comp_) {
        if (key.first == c.edge && key.second == static_cast<int>(ri)) return comp;
      }
    }
  }
  return -1;
}

int ComponentMap::of_piece(const MetricGraph& g, const Piece& piece) const {
  if (piece.empty()) return -1;
  const IntervalOnEdge& iv = piece.intervals.front();
  if (auto v = interval_vertex_point(g, iv)) return of_vertex(*v);
  const auto& ranges = g.live_ranges(iv.edge);
  for (std::size_t ri = 0; ri < ranges.size(); ++ri) {
    if (approx_le(ranges[ri].lo, iv.start) && approx_le(iv.end, ranges[ri].hi)) {
      for (const auto& [key, comp] : range_comp_) {
        if (key.first == iv.edge && key.second == static_cast<int>(ri)) return comp;
      }
    }
  }
  return -1;
}

Piece ComponentMap::component_piece(const MetricGraph& g, int comp) const {
  std::vector<IntervalOnEdge> parts;
  for (const auto& [key, c] : range_comp_) {
    if (c != comp) continue;
    const Flagged& r = g.live_ranges(key.first)[key.second];
    parts.push_back(IntervalOnEdge{key.first, r.lo, r.hi, r.closed_lo, r.closed_hi});
  }
  if (parts.empty()) {
    for (const auto& [v, c] : vertex_comp_) {
      if (c == comp && !g.incident_edges(v).empty()) {
        return piece_from_point(g, PointRef::at_vertex(v));
      }
    }
  }
  return make_piece(g, std::move(parts));
}

std::vector<int> ComponentMap::component_vertices(int comp) const {
  std::vector<int> out;
  for (const auto& [v, c] : vertex_comp_) {
    if (c == comp) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace graphcake
