#pragma once

// Internal: finite weighted graph whose nodes are live vertices plus
// "stations" (registered offsets on live ranges). Distances along the cake
// are exact shortest paths here because distance is piecewise linear in the
// offset between stations. Stations at open range ends act as one-sided
// limits: they connect inward only, so missing points behave as walls while
// infimum distances still come out right.

#include <span>
#include <utility>
#include <vector>

#include "graphcake/metric_graph.hpp"

namespace graphcake::detail {

class AuxGraph {
 public:
  struct Station {
    int edge = -1;
    int range = -1;
    double offset = 0.0;
  };
  struct Segment {
    int edge = -1;
    int range = -1;
    int node_a = -1;
    int node_b = -1;
    double off_a = 0.0;
    double off_b = 0.0;
  };

  AuxGraph(const MetricGraph& g, std::span<const std::pair<int, double>> extra);

  int node_count() const { return static_cast<int>(adj_.size()); }
  int vertex_node(int v) const;
  // Station at (edge, offset) inside the live range that contains `hint`
  // per its flags, or the range whose span covers the offset. Returns -1
  // when no station is registered there.
  int station_node(int edge, int range, double offset) const;
  int locate_range(int edge, double lo, double hi) const;  // -1 if none
  int node_of_point(const PointRef& p) const;              // live points only

  bool is_vertex_node(int n) const { return nodes_[n].edge < 0; }
  int vertex_of(int n) const { return vertex_ids_[n]; }
  const Station& station_of(int n) const { return nodes_[n]; }
  const std::vector<Segment>& segments() const { return segments_; }

  // Nodes covered by a piece: stations within interval spans plus vertex
  // nodes the piece covers. Used both for seeding distances and as
  // candidate targets.
  std::vector<int> piece_nodes(const Piece& piece) const;

  std::vector<double> dijkstra(std::span<const int> sources) const;
  std::vector<double> dijkstra(std::span<const int> sources, std::vector<int>* pred) const;

  int component_of(int n) const { return comp_[n]; }
  int component_count() const { return comp_count_; }
  long edge_count() const { return aux_edges_; }
  int circuit_rank() const {
    return static_cast<int>(aux_edges_ - node_count() + comp_count_);
  }

 private:
  const MetricGraph& g_;
  std::vector<Station> nodes_;              // station payload; edge<0 => vertex node
  std::vector<int> vertex_ids_;             // vertex id per node (or -1)
  std::vector<std::vector<std::pair<int, double>>> adj_;
  std::vector<std::vector<std::vector<std::pair<double, int>>>> stations_;  // [edge][range] -> (offset,node)
  std::vector<std::pair<int, int>> vertex_nodes_;  // (vertex id, node), sorted
  std::vector<Segment> segments_;
  std::vector<int> comp_;
  int comp_count_ = 0;
  long aux_edges_ = 0;

  void add_edge(int a, int b, double w);
};

}  // namespace graphcake::detail
