#include "aux_graph.hpp"

#include <algorithm>
#include <limits>
#include <queue>

#include "graphcake/errors.hpp"

namespace graphcake::detail {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

AuxGraph::AuxGraph(const MetricGraph& g, std::span<const std::pair<int, double>> extra)
    : g_(g) {
  // Vertex nodes.
  for (int v : g.live_vertices()) {
    vertex_nodes_.emplace_back(v, static_cast<int>(nodes_.size()));
    nodes_.push_back(Station{});
    vertex_ids_.push_back(v);
  }
  std::sort(vertex_nodes_.begin(), vertex_nodes_.end());

  // Extra offsets grouped per edge.
  std::vector<std::pair<int, double>> ex(extra.begin(), extra.end());
  std::sort(ex.begin(), ex.end());

  stations_.resize(g.edges().size());
  for (std::size_t ei = 0; ei < g.edges().size(); ++ei) {
    const EdgeRecord& e = g.edges()[ei];
    const auto& ranges = g.live_ranges(e.id);
    stations_[ei].resize(ranges.size());
    auto lo_it = std::lower_bound(ex.begin(), ex.end(), std::make_pair(e.id, -kInf));
    auto hi_it = std::upper_bound(ex.begin(), ex.end(), std::make_pair(e.id, kInf));
    for (std::size_t ri = 0; ri < ranges.size(); ++ri) {
      const Flagged& r = ranges[ri];
      std::vector<double> offs{r.lo, r.hi};
      for (auto it = lo_it; it != hi_it; ++it) {
        const double t = it->second;
        if (t > r.lo + kGeomTol && t < r.hi - kGeomTol) offs.push_back(t);
      }
      std::sort(offs.begin(), offs.end());
      offs.erase(std::unique(offs.begin(), offs.end(),
                             [](double a, double b) { return approx_eq(a, b); }),
                 offs.end());
      auto& st = stations_[ei][ri];
      for (double t : offs) {
        st.emplace_back(t, static_cast<int>(nodes_.size()));
        nodes_.push_back(Station{e.id, static_cast<int>(ri), t});
        vertex_ids_.push_back(-1);
      }
    }
  }

  adj_.resize(nodes_.size());

  for (std::size_t ei = 0; ei < g.edges().size(); ++ei) {
    const EdgeRecord& e = g.edges()[ei];
    const auto& ranges = g.live_ranges(e.id);
    for (std::size_t ri = 0; ri < ranges.size(); ++ri) {
      const Flagged& r = ranges[ri];
      const auto& st = stations_[ei][ri];
      for (std::size_t k = 0; k + 1 < st.size(); ++k) {
        add_edge(st[k].second, st[k + 1].second, st[k + 1].first - st[k].first);
        segments_.push_back(Segment{e.id, static_cast<int>(ri), st[k].second,
                                    st[k + 1].second, st[k].first, st[k + 1].first});
      }
      // Attach range ends to their endpoint vertices (closed flags only).
      if (approx_eq(r.lo, 0.0) && r.closed_lo) {
        int vn = vertex_node(e.u);
        if (vn >= 0) add_edge(vn, st.front().second, 0.0);
      }
      if (approx_eq(r.hi, e.length) && r.closed_hi) {
        int vn = vertex_node(e.v);
        if (vn >= 0) add_edge(vn, st.back().second, 0.0);
      }
    }
  }

  // Components.
  comp_.assign(nodes_.size(), -1);
  for (int n = 0; n < node_count(); ++n) {
    if (comp_[n] >= 0) continue;
    std::vector<int> stack{n};
    comp_[n] = comp_count_;
    while (!stack.empty()) {
      int cur = stack.back();
      stack.pop_back();
      for (const auto& [nb, w] : adj_[cur]) {
        if (comp_[nb] < 0) {
          comp_[nb] = comp_count_;
          stack.push_back(nb);
        }
      }
    }
    ++comp_count_;
  }
}

void AuxGraph::add_edge(int a, int b, double w) {
  adj_[a].emplace_back(b, w);
  adj_[b].emplace_back(a, w);
  ++aux_edges_;
}

int AuxGraph::vertex_node(int v) const {
  auto it = std::lower_bound(vertex_nodes_.begin(), vertex_nodes_.end(),
                             std::make_pair(v, -1));
  if (it != vertex_nodes_.end() && it->first == v) return it->second;
  return -1;
}

int AuxGraph::station_node(int edge, int range, double offset) const {
  int ei = -1;
  for (std::size_t i = 0; i < g_.edges().size(); ++i) {
    if (g_.edges()[i].id == edge) {
      ei = static_cast<int>(i);
      break;
    }
  }
  if (ei < 0 || range < 0 || range >= static_cast<int>(stations_[ei].size())) return -1;
  for (const auto& [t, node] : stations_[ei][range]) {
    if (approx_eq(t, offset)) return node;
  }
  return -1;
}

int AuxGraph::locate_range(int edge, double lo, double hi) const {
  const auto& ranges = g_.live_ranges(edge);
  for (std::size_t ri = 0; ri < ranges.size(); ++ri) {
    if (approx_le(ranges[ri].lo, lo) && approx_le(hi, ranges[ri].hi)) {
      return static_cast<int>(ri);
    }
  }
  return -1;
}

int AuxGraph::node_of_point(const PointRef& p) const {
  if (p.is_vertex()) return vertex_node(p.vertex);
  int ri = locate_range(p.edge, p.offset, p.offset);
  if (ri < 0) return -1;
  return station_node(p.edge, ri, p.offset);
}

std::vector<int> AuxGraph::piece_nodes(const Piece& piece) const {
  std::vector<int> out;
  for (const IntervalOnEdge& iv : piece.intervals) {
    int ri = locate_range(iv.edge, iv.start, iv.end);
    if (ri < 0) {
      // Vertex-degenerate interval at a detached end: handled below through
      // the covered-vertex pass.
      continue;
    }
    int ei = -1;
    for (std::size_t i = 0; i < g_.edges().size(); ++i) {
      if (g_.edges()[i].id == iv.edge) ei = static_cast<int>(i);
    }
    for (const auto& [t, node] : stations_[ei][ri]) {
      if (t >= iv.start - kGeomTol && t <= iv.end + kGeomTol) out.push_back(node);
    }
  }
  for (int v : piece_vertices(g_, piece)) {
    int vn = vertex_node(v);
    if (vn >= 0) out.push_back(vn);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<double> AuxGraph::dijkstra(std::span<const int> sources) const {
  return dijkstra(sources, nullptr);
}

std::vector<double> AuxGraph::dijkstra(std::span<const int> sources,
                                       std::vector<int>* pred) const {
  std::vector<double> dist(nodes_.size(), kInf);
  if (pred) pred->assign(nodes_.size(), -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (int s : sources) {
    if (s < 0) throw InvalidInputError("point is not on the graph");
    dist[s] = 0.0;
    pq.emplace(0.0, s);
  }
  while (!pq.empty()) {
    auto [d, n] = pq.top();
    pq.pop();
    if (d > dist[n]) continue;
    for (const auto& [nb, w] : adj_[n]) {
      const double nd = d + w;
      if (nd < dist[nb] - 1e-15) {
        dist[nb] = nd;
        if (pred) (*pred)[nb] = n;
        pq.emplace(nd, nb);
      }
    }
  }
  return dist;
}

}  // namespace graphcake::detail
