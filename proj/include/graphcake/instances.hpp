#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "graphcake/allocator.hpp"
#include "graphcake/metric_graph.hpp"
#include "graphcake/valuation.hpp"

#include "json.hpp"

namespace graphcake {

// A self-contained problem instance: the cake, the separation parameter,
// the agents with their valuations, and optionally a declared partition per
// agent. Round-trips through canonical JSON byte-identically.
struct InstanceAgent {
  std::string name;
  Valuation valuation;
  std::optional<std::vector<Piece>> partition;
};

struct InstanceDoc {
  double separation = 0.0;
  MetricGraph graph;
  std::vector<InstanceAgent> agents;
  nlohmann::json meta = nlohmann::json::object();

  std::vector<AgentPartition> declared_partitions() const;
};

// Tight instances behind the lower-bound construction: a union of r cycles
// (plus nothing else) on which no allocation can give all n agents their
// 1-out-of-(N-1) maximin share, N = min(n + r, 2n - 1). Each emitted agent
// carries an explicit partition with minimum part value exactly 1, which
// certifies MMS^{N-1} >= 1 by construction.
InstanceDoc gen_cycle_counterexample(int n, int r, double s, double eps);

// Brute-force check over the generated cycle instances: the maximum number
// of agents that can simultaneously receive positive value from any
// s-separated allocation. Arcs are discretized inside the valuable regions
// (default resolution: a quarter of the shortest region).
int check_positive_value_bound(const InstanceDoc& doc,
                               std::optional<double> resolution = std::nullopt,
                               std::uint64_t budget = 50'000'000);

// Seeded random forest instance with valid random per-agent partitions of
// n parts each. Throws when the parts cannot be placed.
InstanceDoc gen_random_forest_instance(std::uint64_t seed, int trees, int vertices, int n,
                                       double s);

}  // namespace graphcake
