#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "graphcake/geometry.hpp"

namespace graphcake {

// The cake: a finite undirected graph with positive edge lengths, where
// pieces are unions of intervals on edges and distances are measured along
// the edges. Surgery (subtracting pieces, deleting vertices) keeps the edge
// records intact and tracks which sub-ranges of each edge are still present.

struct EdgeRecord {
  int id = 0;
  int u = 0;
  int v = 0;
  double length = 0.0;
};

// A location on the cake: either a vertex or a point strictly inside an
// edge. Offsets are measured from endpoint `u` of the edge record; offsets
// at 0 or length canonicalize to the vertex form.
struct PointRef {
  enum class Kind { Vertex, Interior };
  Kind kind = Kind::Vertex;
  int vertex = -1;
  int edge = -1;
  double offset = 0.0;

  static PointRef at_vertex(int v) {
    PointRef p;
    p.kind = Kind::Vertex;
    p.vertex = v;
    return p;
  }
  static PointRef interior(int e, double t) {
    PointRef p;
    p.kind = Kind::Interior;
    p.edge = e;
    p.offset = t;
    return p;
  }
  bool is_vertex() const { return kind == Kind::Vertex; }
};

struct IntervalOnEdge {
  int edge = -1;
  double start = 0.0;
  double end = 0.0;
  bool closed_start = true;
  bool closed_end = true;

  double length() const { return end - start; }
  Flagged flags() const { return Flagged{start, end, closed_start, closed_end}; }
};

// A finite union of intervals, canonical: per-edge sorted, disjoint, and
// intervals meeting at a point merged only when at least one side is closed
// there. Whether a piece contains a vertex is read off the flags: it does
// iff some interval reaches the vertex's offset with a closed end.
struct Piece {
  std::vector<IntervalOnEdge> intervals;

  bool empty() const { return intervals.empty(); }
  double total_length() const;
};

struct GraphDistance {
  double value = 0.0;
  bool finite = true;

  static GraphDistance infinite() { return GraphDistance{0.0, false}; }
  static GraphDistance of(double d) { return GraphDistance{d, true}; }
};

class MetricGraph {
 public:
  MetricGraph() = default;
  MetricGraph(std::vector<int> vertex_ids, std::vector<EdgeRecord> edges);

  const std::vector<int>& vertex_ids() const { return vertex_ids_; }
  const std::vector<EdgeRecord>& edges() const { return edges_; }
  const std::set<int>& deleted_vertices() const { return deleted_; }

  bool has_vertex(int v) const;
  bool has_edge(int e) const;
  bool vertex_live(int v) const;
  const EdgeRecord& edge(int e) const;
  const std::vector<Flagged>& live_ranges(int e) const;
  std::vector<int> live_vertices() const;
  std::vector<int> incident_edges(int v) const;  // all edge ids touching v
  bool fully_live() const;

  // Surgery. Both return modified copies; `this` is immutable.
  MetricGraph with_deleted_vertices(const std::vector<int>& vs) const;
  MetricGraph with_subtracted(const Piece& piece) const;

 private:
  std::vector<int> vertex_ids_;
  std::vector<EdgeRecord> edges_;
  std::set<int> deleted_;
  std::vector<std::vector<Flagged>> live_;  // parallel to edges_
  int edge_index(int e) const;

  friend MetricGraph subtract(const MetricGraph&, const Piece&);
  friend MetricGraph delete_vertices(const MetricGraph&, const std::vector<int>&);
};

// --- points and pieces -----------------------------------------------------

// Snaps offsets at 0/length to the vertex form.
PointRef canonical_point(const MetricGraph& g, int edge, double offset);
bool points_equal(const MetricGraph& g, const PointRef& a, const PointRef& b);
std::string point_to_string(const PointRef& p);

bool point_on_graph(const MetricGraph& g, const PointRef& p);

// Builds a canonical piece from raw intervals; throws InvalidInputError on
// malformed intervals (bad edge ids, out-of-range offsets, invalid flags).
Piece make_piece(const MetricGraph& g, std::vector<IntervalOnEdge> intervals);
Piece piece_from_point(const MetricGraph& g, const PointRef& p);
Piece closure(const Piece& piece);
Piece whole_graph_piece(const MetricGraph& g);

bool piece_on_graph(const MetricGraph& g, const Piece& piece);
bool piece_contains_point(const MetricGraph& g, const Piece& piece, const PointRef& p);
bool piece_covers_vertex(const MetricGraph& g, const Piece& piece, int v);
std::set<int> piece_vertices(const MetricGraph& g, const Piece& piece);
bool pieces_intersect(const MetricGraph& g, const Piece& a, const Piece& b);
// True iff the intersection of a and b has positive total length.
bool pieces_overlap_positively(const MetricGraph& g, const Piece& a, const Piece& b);
bool piece_contains(const MetricGraph& g, const Piece& outer, const Piece& inner);
Piece piece_union(const MetricGraph& g, const Piece& a, const Piece& b);

// --- operations ------------------------------------------------------------

GraphDistance shortest_distance(const MetricGraph& g, const PointRef& p, const PointRef& q);
GraphDistance piece_distance(const MetricGraph& g, const Piece& a, const Piece& b);
bool is_connected_piece(const MetricGraph& g, const Piece& piece);

// Unique simple path between two points of an acyclic graph, as a closed
// connected piece whose total length equals the shortest distance.
Piece tree_path(const MetricGraph& g, const PointRef& p, const PointRef& q);

// The unique point of a closed connected X through which every path from X
// to r passes; also the unique distance minimizer.
PointRef nearest_in_piece_to_point(const MetricGraph& g, const Piece& x, const PointRef& r);

// Same for a disjoint closed connected target set R: the result equals
// nearest_in_piece_to_point(x, r) for every r in R.
PointRef nearest_in_piece_to_piece(const MetricGraph& g, const Piece& x, const Piece& r);

// Open neighborhood {x : Dist(x, A) < s} as a piece.
Piece s_neighborhood(const MetricGraph& g, const Piece& a, double s);

MetricGraph subtract(const MetricGraph& g, const Piece& piece);
MetricGraph delete_vertices(const MetricGraph& g, const std::vector<int>& vs);

// Lexicographically smallest minimum-cardinality vertex set whose deletion
// leaves the live material acyclic. Exhaustive search by cardinality; meant
// for desk-scale graphs.
std::vector<int> fvs(const MetricGraph& g);

// |E| - |V| + c of the live material; upper-bounds |fvs(g)|.
int circuit_rank(const MetricGraph& g);

bool is_acyclic(const MetricGraph& g);

// Connected components of the live material: component index per piece /
// point / vertex, or -1 when off the graph.
class ComponentMap {
 public:
  explicit ComponentMap(const MetricGraph& g);
  int count() const { return count_; }
  int of_vertex(int v) const;
  int of_point(const MetricGraph& g, const PointRef& p) const;
  int of_piece(const MetricGraph& g, const Piece& piece) const;
  // Live material of one component, as a piece mirroring the live ranges.
  Piece component_piece(const MetricGraph& g, int comp) const;
  // Vertices of one component (sorted).
  std::vector<int> component_vertices(int comp) const;

 private:
  int count_ = 0;
  std::vector<std::pair<int, int>> vertex_comp_;           // (vertex, comp)
  std::vector<std::pair<std::pair<int, int>, int>> range_comp_;  // ((edge,range),comp)
};

}  // namespace graphcake
