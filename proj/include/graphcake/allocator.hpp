#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "graphcake/metric_graph.hpp"
#include "graphcake/valuation.hpp"

namespace graphcake {

enum class IntersectionMode { Disjoint, FiniteOverlap };

// One agent's declared family of parts: connected, pairwise s-separated
// (s > 0) or pairwise disjoint (s = 0). This is the input contract of every
// allocator; the allocators never look at valuations.
struct AgentPartition {
  std::string agent;
  std::vector<Piece> parts;
  double separation = 0.0;
  IntersectionMode mode = IntersectionMode::Disjoint;
};

// Throws InvalidInputError with a diagnostic when a partition violates its
// own declared constraints.
void validate_partition(const MetricGraph& g, const AgentPartition& p);

struct AllocatedPiece {
  std::string agent;
  Piece piece;
  std::optional<int> contains_part;  // index into the agent's submitted parts
};

struct Allocation {
  double separation = 0.0;
  std::vector<AllocatedPiece> pieces;
};

// Recursive forest allocation: repeatedly select a 0-good (s = 0) or s-good
// (s > 0) part among all surviving parts in one tree, hand it to its owner
// intact, and carve the remaining cake. Every agent ends up with a piece
// equal to one of her submitted parts. Requires at least n parts per agent.
Allocation allocate_forest(const MetricGraph& g,
                           const std::vector<AgentPartition>& partitions, double s);

// General graphs: delete a minimum feedback vertex set (s = 0) or remove
// open length-s/2 stubs around each of its vertices (s > 0, all edge
// lengths >= s), drop the at-most-one damaged part per agent per vertex,
// allocate on the remaining forest, and re-check separation against the
// original graph. Requires n + |fvs(g)| parts per agent.
Allocation allocate_general(const MetricGraph& g,
                            const std::vector<AgentPartition>& partitions, double s);

// Bipartite agents-vs-components machinery behind the unicyclic-union
// allocator.
struct BipartiteGraph {
  int left = 0;   // agents
  int right = 0;  // components
  std::vector<std::pair<int, int>> edges;
};

struct BipartiteDecomposition {
  std::vector<int> x_small, x_large;      // agent sides
  std::vector<int> y_small, y_large;      // component sides
  std::map<int, int> matching;            // X_L agent -> Y_L component
};

// Maximum matching plus alternating-path reachability from unmatched
// agents; the three decomposition properties are re-verified by brute force
// before returning.
BipartiteDecomposition bipartite_decompose(const BipartiteGraph& h);

// Disjoint unions of components with fvs number <= 1 (s > 0, edge lengths
// >= s). Requires N = min(n + fvs(g), 2n - 1) parts per agent; every agent
// receives a piece CONTAINING at least one of her parts.
Allocation allocate_unicyclic_union(const MetricGraph& g,
                                    const std::vector<AgentPartition>& partitions,
                                    double s);

// --- verification -----------------------------------------------------------

struct CheckEntry {
  std::string name;
  std::string detail;
  bool pass = true;
};

struct VerifyReport {
  std::vector<CheckEntry> checks;
  bool pass() const {
    for (const auto& c : checks) {
      if (!c.pass) return false;
    }
    return true;
  }
};

struct VerifyOptions {
  double separation = 0.0;
  IntersectionMode mode = IntersectionMode::Disjoint;
  const std::vector<AgentPartition>* partitions = nullptr;  // containment checks
  const std::map<std::string, Valuation>* valuations = nullptr;
  const std::map<std::string, double>* min_values = nullptr;
  // When set, separation is re-checked against this graph instead of `g`
  // (used to verify against the original cake after surgery).
  const MetricGraph* distance_graph = nullptr;
};

VerifyReport verify_allocation(const MetricGraph& g, const Allocation& alloc,
                               const VerifyOptions& opts);

}  // namespace graphcake
