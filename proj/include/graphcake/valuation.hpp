#pragma once

#include <map>
#include <optional>
#include <vector>

#include "graphcake/metric_graph.hpp"

namespace graphcake {

// Additive valuation with piecewise-constant density per edge. Gaps between
// segments carry density zero; single points always have value zero.
struct DensitySegment {
  double start = 0.0;
  double end = 0.0;
  double density = 0.0;
};

class Valuation {
 public:
  Valuation() = default;
  // Validates against the graph: known edges, segments inside [0, length],
  // disjoint and sorted, densities finite and nonnegative.
  Valuation(const MetricGraph& g, std::map<int, std::vector<DensitySegment>> per_edge);

  const std::map<int, std::vector<DensitySegment>>& segments() const { return per_edge_; }
  double max_density() const;

  double piece_value(const Piece& piece) const;
  double total_value() const;
  // Value of the sub-interval [lo, hi] of one edge.
  double interval_value(int edge, double lo, double hi) const;

 private:
  std::map<int, std::vector<DensitySegment>> per_edge_;
};

// Smallest offset (walking in `direction` from `from_offset`, bounded by
// [0, edge length]) such that the traversed sub-interval has value exactly
// `t`; nullopt when not enough value remains.
std::optional<double> cut_at_value(const MetricGraph& g, const Valuation& v, int edge,
                                   double from_offset, int direction, double t);

// All segment boundaries per edge, sorted, including 0 and the edge length.
std::map<int, std::vector<double>> breakpoints(const MetricGraph& g, const Valuation& v);

}  // namespace graphcake
