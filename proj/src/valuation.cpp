#include "graphcake/valuation.hpp"

#include <algorithm>
#include <cmath>

#include "graphcake/errors.hpp"

namespace graphcake {

Valuation::Valuation(const MetricGraph& g, std::map<int, std::vector<DensitySegment>> per_edge)
    : per_edge_(std::move(per_edge)) {
  for (auto& [eid, segs] : per_edge_) {
    const EdgeRecord& e = g.edge(eid);
    std::sort(segs.begin(), segs.end(),
              [](const DensitySegment& a, const DensitySegment& b) { return a.start < b.start; });
    double prev_end = -kGeomTol;
    for (const DensitySegment& s : segs) {
      if (!(std::isfinite(s.density)) || s.density < 0.0) {
        throw InvalidInputError("density must be finite and nonnegative");
      }
      if (s.start < -kGeomTol || s.end > e.length + kGeomTol || s.start > s.end + kGeomTol) {
        throw InvalidInputError("density segment outside edge " + std::to_string(eid));
      }
      if (s.start < prev_end - kGeomTol) {
        throw InvalidInputError("density segments overlap on edge " + std::to_string(eid));
      }
      prev_end = s.end;
    }
  }
}

double Valuation::max_density() const {
  double m = 0.0;
  for (const auto& [eid, segs] : per_edge_) {
    for (const DensitySegment& s : segs) m = std::max(m, s.density);
  }
  return m;
}

double Valuation::interval_value(int edge, double lo, double hi) const {
  auto it = per_edge_.find(edge);
  if (it == per_edge_.end()) return 0.0;
  double sum = 0.0;
  for (const DensitySegment& s : it->second) {
    double a = std::max(lo, s.start);
    double b = std::min(hi, s.end);
    if (b > a) sum += (b - a) * s.density;
  }
  return sum;
}

double Valuation::piece_value(const Piece& piece) const {
  double sum = 0.0;
  for (const IntervalOnEdge& iv : piece.intervals) {
    sum += interval_value(iv.edge, iv.start, iv.end);
  }
  return sum;
}

double Valuation::total_value() const {
  double sum = 0.0;
  for (const auto& [eid, segs] : per_edge_) {
    for (const DensitySegment& s : segs) sum += (s.end - s.start) * s.density;
  }
  return sum;
}

std::optional<double> cut_at_value(const MetricGraph& g, const Valuation& v, int edge,
                                   double from_offset, int direction, double t) {
  if (t < 0.0) throw InvalidInputError("cut_at_value: negative target");
  const EdgeRecord& e = g.edge(edge);
  if (t <= kGeomTol) return from_offset;
  auto it = v.segments().find(edge);
  std::vector<DensitySegment> segs;
  if (it != v.segments().end()) segs = it->second;
  if (direction < 0) {
    // Mirror the edge and walk forward.
    double acc = 0.0;
    double pos = e.length - from_offset;
    for (auto rit = segs.rbegin(); rit != segs.rend(); ++rit) {
      DensitySegment s{e.length - rit->end, e.length - rit->start, rit->density};
      if (s.end <= pos || s.density <= 0.0) continue;
      double a = std::max(pos, s.start);
      double take = (s.end - a) * s.density;
      if (acc + take >= t - kGeomTol) {
        double need = t - acc;
        return e.length - (a + need / s.density);
      }
      acc += take;
    }
    return std::nullopt;
  }
  double acc = 0.0;
  double pos = from_offset;
  for (const DensitySegment& s : segs) {
    if (s.end <= pos) continue;
    double a = std::max(pos, s.start);
    if (s.density <= 0.0) continue;
    double take = (s.end - a) * s.density;
    if (acc + take >= t - kGeomTol) {
      double need = t - acc;
      return a + need / s.density;
    }
    acc += take;
  }
  return std::nullopt;
}

std::map<int, std::vector<double>> breakpoints(const MetricGraph& g, const Valuation& v) {
  std::map<int, std::vector<double>> out;
  for (const EdgeRecord& e : g.edges()) {
    std::vector<double> pts{0.0, e.length};
    auto it = v.segments().find(e.id);
    if (it != v.segments().end()) {
      for (const DensitySegment& s : it->second) {
        pts.push_back(s.start);
        pts.push_back(s.end);
      }
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](double a, double b) { return approx_eq(a, b); }),
              pts.end());
    out[e.id] = std::move(pts);
  }
  return out;
}

}  // namespace graphcake
