#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "graphcake/allocator.hpp"
#include "graphcake/metric_graph.hpp"
#include "graphcake/valuation.hpp"

namespace graphcake {

inline constexpr std::uint64_t kDefaultSearchBudget = 20'000'000;

// Result of a maximin-share oracle. The reported value is always witnessed
// by the returned partition, so it is a lower bound on the true maximin
// share; the discretized oracle is additionally within
// (max density) * k * resolution of it for piecewise-constant densities.
struct MmsResult {
  double value = 0.0;
  AgentPartition partition;
  std::string method;  // "path-exact" | "discretized"
  std::optional<double> resolution;
};

bool is_path_graph(const MetricGraph& g);

// Binary search on the target value with a leftmost-greedy feasibility
// check (cut a piece of value t, skip length s, repeat k times). Only for
// single-path cakes. Value within 1e-6 of the supremum.
MmsResult mms_path_exact(const MetricGraph& g, const Valuation& v, int k, double s);

// Exhaustive search over partitions whose cut points lie on the candidate
// grid (valuation breakpoints, vertices, and a `resolution`-spaced grid per
// edge). Exact on the grid; dynamic programming on paths, pruned
// connected-set enumeration elsewhere. Throws BudgetExceededError rather
// than give a silent wrong answer.
MmsResult mms_discretized(const MetricGraph& g, const Valuation& v, int k, double s,
                          double resolution,
                          std::uint64_t budget = kDefaultSearchBudget);

// Dispatch: path-exact on single paths, discretized elsewhere.
MmsResult maximin_partition(const MetricGraph& g, const Valuation& v, int k, double s,
                            std::optional<double> resolution = std::nullopt,
                            std::uint64_t budget = kDefaultSearchBudget);

// min(s, shortest edge, shortest valuation segment) / 20.
double default_resolution(const MetricGraph& g, const Valuation& v, double s);

}  // namespace graphcake
