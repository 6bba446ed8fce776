#include "doctest.h"

#include "graphcake/errors.hpp"
#include "graphcake/good_piece.hpp"
#include "support.hpp"

using namespace graphcake;
using gctest::Rng;

namespace {

MetricGraph unit_edge() { return MetricGraph({0, 1}, {EdgeRecord{0, 0, 1, 1.0}}); }

MetricGraph star(int k, double len = 1.0) {
  std::vector<int> verts{0};
  std::vector<EdgeRecord> edges;
  for (int i = 0; i < k; ++i) {
    verts.push_back(i + 1);
    edges.push_back(EdgeRecord{i, 0, i + 1, len});
  }
  return MetricGraph(verts, edges);
}

PieceFamily family_of(std::vector<Piece> pieces) {
  PieceFamily f;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    f.members.push_back({"p" + std::to_string(i), std::move(pieces[i])});
  }
  return f;
}

Piece iv(const MetricGraph& g, int e, double a, double b, bool ca = true, bool cb = true) {
  return make_piece(g, {IntervalOnEdge{e, a, b, ca, cb}});
}

// Figure-1 star: s = 0.5, Alice holds [0.25,1] on e0 and e2, Bob [0.2,1] on e1.
struct Fig1 {
  MetricGraph g = star(3);
  Piece a1, a2, b;
  PieceFamily fam;
  Fig1() {
    a1 = iv(g, 0, 0.25, 1.0);
    b = iv(g, 1, 0.2, 1.0);
    a2 = iv(g, 2, 0.25, 1.0);
    fam = family_of({a1, b, a2});
  }
};

}  // namespace

TEST_CASE("is_zero_good examples") {
  auto g = unit_edge();
  auto fam = family_of({iv(g, 0, 0.0, 0.5), iv(g, 0, 0.4, 1.0), iv(g, 0, 0.6, 1.0)});
  CHECK(is_zero_good(g, fam, 0));
  CHECK_FALSE(is_zero_good(g, fam, 1));

  auto single = family_of({iv(g, 0, 0.2, 0.8)});
  CHECK(is_zero_good(g, single, 0));
}

TEST_CASE("find_zero_good base case picks the minimal right endpoint") {
  auto g = unit_edge();
  auto fam = family_of({iv(g, 0, 0.0, 0.5), iv(g, 0, 0.4, 1.0), iv(g, 0, 0.6, 1.0)});
  CHECK(find_zero_good(g, fam) == 0);
}

TEST_CASE("find_zero_good on a star where all pieces share the center") {
  auto g = star(3);
  auto fam = family_of({iv(g, 0, 0.0, 0.5), iv(g, 1, 0.0, 0.7), iv(g, 2, 0.0, 0.3)});
  auto j = find_zero_good(g, fam);
  CHECK(is_zero_good(g, fam, j));
}

TEST_CASE("find_zero_good prefers the right-open piece on a tie") {
  auto g = unit_edge();
  auto fam = family_of({iv(g, 0, 0.2, 0.5, false, false), iv(g, 0, 0.5, 0.9)});
  auto j = find_zero_good(g, fam);
  CHECK(j == 0);
  CHECK(is_zero_good(g, fam, j));

  // right-closed [l,0.5] would intersect both the open (0.2,0.5) and
  // [0.5,0.9] while they miss each other
  auto fam2 = family_of({iv(g, 0, 0.2, 0.5, false, false), iv(g, 0, 0.1, 0.5),
                         iv(g, 0, 0.5, 0.9)});
  auto j2 = find_zero_good(g, fam2);
  CHECK(j2 == 0);
  CHECK(is_zero_good(g, fam2, j2));
  CHECK_FALSE(is_zero_good(g, fam2, 1));
}

TEST_CASE("find_zero_good errors") {
  auto g = unit_edge();
  PieceFamily empty;
  CHECK_THROWS_AS(find_zero_good(g, empty), InvalidInputError);
}

TEST_CASE("is_s_good star arithmetic") {
  auto g = star(3, 3.0);
  // offsets measured from the center
  auto x1 = iv(g, 0, 0.6, 3.0);
  auto x2 = iv(g, 1, 0.6, 3.0);
  auto x3 = iv(g, 2, 0.2, 3.0);
  auto fam = family_of({x1, x2, x3});
  CHECK_FALSE(is_s_good(g, fam, 2, 1.0));  // x1,x2 within 0.8 of x3 but 1.2 apart
  CHECK(is_s_good(g, fam, 0, 1.0));
}

TEST_CASE("find_s_good with a pinned root reproduces the trace arithmetic") {
  auto g = star(3, 3.0);
  auto fam = family_of({iv(g, 0, 0.6, 3.0), iv(g, 1, 0.6, 3.0), iv(g, 2, 0.2, 3.0)});
  auto [j, trace] = find_s_good(g, fam, 1.0, PointRef::at_vertex(1));  // leaf of e0
  CHECK(trace.root_distances[0] == doctest::Approx(0.0));
  CHECK(trace.root_distances[1] == doctest::Approx(3.6));
  CHECK(trace.root_distances[2] == doctest::Approx(3.2));
  CHECK(j == 1);
  CHECK(is_s_good(g, fam, j, 1.0));
}

TEST_CASE("figure-1 regression: the dashed piece is not s-good") {
  Fig1 f;
  const double s = 0.5;
  // distances: B to A1 and A2 are 0.45 < s, A1 to A2 is 0.5 (not < s)
  CHECK(piece_distance(f.g, f.b, f.a1).value == doctest::Approx(0.45));
  CHECK(piece_distance(f.g, f.a1, f.a2).value == doctest::Approx(0.5));
  CHECK_FALSE(is_s_good(f.g, f.fam, 1, s));
  CHECK(is_s_good(f.g, f.fam, 0, s));
  CHECK(is_s_good(f.g, f.fam, 2, s));

  // find_s_good never hands back B, under the default and random roots
  Rng rng(5);
  auto [j0, t0] = find_s_good(f.g, f.fam, s);
  CHECK(j0 != 1);
  for (int k = 0; k < 5; ++k) {
    auto root = gctest::random_point(rng, f.g);
    auto [j, t] = find_s_good(f.g, f.fam, s, root);
    CHECK(j != 1);
    CHECK(is_s_good(f.g, f.fam, j, s));
  }
}

TEST_CASE("find_s_good singleton family") {
  auto g = unit_edge();
  auto fam = family_of({iv(g, 0, 0.2, 0.6)});
  auto [j, trace] = find_s_good(g, fam, 0.1);
  CHECK(j == 0);
  CHECK(trace.pairs.size() == 1);
}

TEST_CASE("find_s_good rejects open pieces and empty families") {
  auto g = unit_edge();
  CHECK_THROWS_AS(find_s_good(g, family_of({iv(g, 0, 0.2, 0.6, false, true)}), 0.1),
                  InvalidInputError);
  PieceFamily empty;
  CHECK_THROWS_AS(find_s_good(g, empty, 0.1), InvalidInputError);
}

TEST_CASE("random existence and trace soundness") {
  Rng rng(2024);
  for (int trial = 0; trial < 150; ++trial) {
    auto g = gctest::random_tree(rng, gctest::uniform_int(rng, 3, 10));
    const int np = gctest::uniform_int(rng, 1, 8);

    // 0-good on mixed open/closed pieces
    std::vector<Piece> zero_pieces;
    for (int i = 0; i < np; ++i) zero_pieces.push_back(gctest::random_flagged_piece(rng, g));
    auto fam0 = family_of(zero_pieces);
    auto j0 = find_zero_good(g, fam0);
    CHECK(is_zero_good(g, fam0, j0));

    // s-good on closed pieces
    std::vector<Piece> closed_pieces;
    for (int i = 0; i < np; ++i) {
      closed_pieces.push_back(gctest::random_closed_connected_piece(rng, g, 0.7));
    }
    double s = gctest::uniform(rng, 0.05, 1.5);
    auto fam1 = family_of(closed_pieces);
    auto [j1, trace] = find_s_good(g, fam1, s);
    CHECK(is_s_good(g, fam1, j1, s));

    // Trace soundness: claim-1/2 dichotomy, the distance identity, and the
    // claim-3 inequality.
    const Piece& x0 = fam1.members[j1].piece;
    const PointRef& x0p = trace.projections[j1];
    for (std::size_t j = 0; j < fam1.size(); ++j) {
      if (j == j1) continue;
      const auto& w = trace.pairs[j];
      CHECK(w.intersects_chosen == pieces_intersect(g, fam1.members[j].piece, x0));
      if (w.intersects_chosen) {
        CHECK(piece_contains_point(g, fam1.members[j].piece, x0p));
      } else {
        REQUIRE(w.y.has_value());
        REQUIRE(w.z.has_value());
        // Claim 2: the chosen piece's projection toward X_j is x0 itself.
        auto back = nearest_in_piece_to_piece(g, x0, fam1.members[j].piece);
        CHECK(points_equal(g, back, x0p));
        // Distance identity.
        auto dsets = piece_distance(g, x0, fam1.members[j].piece);
        auto dpt = piece_distance(g, piece_from_point(g, x0p), fam1.members[j].piece);
        REQUIRE(dsets.finite);
        REQUIRE(dpt.finite);
        CHECK(std::fabs(dsets.value - dpt.value) <= 1e-9);
        // Claim 3.
        auto dyz = shortest_distance(g, *w.y, *w.z);
        auto dxz = shortest_distance(g, x0p, *w.z);
        REQUIRE(dyz.finite);
        REQUIRE(dxz.finite);
        CHECK(dyz.value <= dxz.value + 1e-9);
      }
    }
  }
}
