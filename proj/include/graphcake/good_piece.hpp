#pragma once

#include <optional>
#include <string>
#include <vector>

#include "graphcake/metric_graph.hpp"

namespace graphcake {

// Family of connected pieces living inside one tree of the graph, with an
// owner tag per piece so allocation callers can map choices back.
struct PieceFamily {
  struct Member {
    std::string owner;
    Piece piece;
  };
  std::vector<Member> members;

  std::size_t size() const { return members.size(); }
};

// Evidence recorded while selecting an s-good piece: the root, every
// piece's projection toward the root with its distance, and for each piece
// disjoint from the winner the witness points y_j (nearest point of X_j to
// the winner) and z_j (where the two root paths meet).
struct GoodPieceTrace {
  std::size_t chosen = 0;
  PointRef root;
  std::vector<PointRef> projections;
  std::vector<double> root_distances;
  struct PairWitness {
    bool intersects_chosen = false;
    std::optional<PointRef> y;
    std::optional<PointRef> z;
  };
  std::vector<PairWitness> pairs;  // indexed like the family; entry for the winner is trivial
};

// Brute-force check: any two family members meeting piece j also meet each
// other.
bool is_zero_good(const MetricGraph& g, const PieceFamily& family, std::size_t j);

// Brute-force check: any two family members within distance < s of piece j
// are within distance < s of each other. Pieces must be closed.
bool is_s_good(const MetricGraph& g, const PieceFamily& family, std::size_t j, double s);

// Selects a 0-good piece by leaf-edge induction. Pieces may be open,
// half-open, or closed; the containing tree of the family is used and must
// be acyclic.
std::size_t find_zero_good(const MetricGraph& g, const PieceFamily& family);

// Selects an s-good piece: project every piece onto a root and take the
// farthest. The default root is the smallest vertex id in the family's
// tree; tests may pin another root.
std::pair<std::size_t, GoodPieceTrace> find_s_good(const MetricGraph& g,
                                                   const PieceFamily& family, double s,
                                                   std::optional<PointRef> root = std::nullopt);

}  // namespace graphcake
