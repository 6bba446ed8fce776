#include "doctest.h"

#include <cmath>

#include "graphcake/errors.hpp"
#include "graphcake/metric_graph.hpp"
#include "support.hpp"

using namespace graphcake;
using gctest::Rng;

namespace {

MetricGraph single_edge(double len = 10.0) {
  return MetricGraph({0, 1}, {EdgeRecord{0, 0, 1, len}});
}

// Star with `k` unit-ish edges from center vertex 0; edge i goes 0 -> i+1,
// offsets measured from the center.
MetricGraph star(int k, double len = 1.0) {
  std::vector<int> verts{0};
  std::vector<EdgeRecord> edges;
  for (int i = 0; i < k; ++i) {
    verts.push_back(i + 1);
    edges.push_back(EdgeRecord{i, 0, i + 1, len});
  }
  return MetricGraph(verts, edges);
}

MetricGraph triangle() {
  return MetricGraph({0, 1, 2}, {EdgeRecord{0, 0, 1, 1.0}, EdgeRecord{1, 1, 2, 1.0},
                                 EdgeRecord{2, 2, 0, 1.0}});
}

Piece interval(const MetricGraph& g, int e, double a, double b, bool ca = true,
               bool cb = true) {
  return make_piece(g, {IntervalOnEdge{e, a, b, ca, cb}});
}

double dist_value(const GraphDistance& d) {
  REQUIRE(d.finite);
  return d.value;
}

}  // namespace

TEST_CASE("shortest_distance on a single edge") {
  auto g = single_edge();
  auto d = shortest_distance(g, PointRef::interior(0, 2.0), PointRef::interior(0, 7.0));
  CHECK(dist_value(d) == doctest::Approx(5.0));
}

TEST_CASE("shortest_distance through a star center") {
  auto g = star(3);
  auto d = shortest_distance(g, PointRef::at_vertex(1), PointRef::at_vertex(2));
  CHECK(dist_value(d) == doctest::Approx(2.0));
}

TEST_CASE("shortest_distance across components is infinite") {
  MetricGraph g({0, 1, 2, 3}, {EdgeRecord{0, 0, 1, 1.0}, EdgeRecord{1, 2, 3, 1.0}});
  auto d = shortest_distance(g, PointRef::interior(0, 0.5), PointRef::interior(1, 0.5));
  CHECK_FALSE(d.finite);
}

TEST_CASE("shortest_distance rejects a point off the graph") {
  auto g = single_edge();
  auto cut = subtract(g, interval(g, 0, 3.0, 5.0));
  CHECK_THROWS_AS(shortest_distance(cut, PointRef::interior(0, 4.0), PointRef::interior(0, 1.0)),
                  InvalidInputError);
}

TEST_CASE("piece_distance examples") {
  auto g = single_edge();
  CHECK(dist_value(piece_distance(g, interval(g, 0, 0, 2), interval(g, 0, 3.5, 5))) ==
        doctest::Approx(1.5));
  CHECK(dist_value(piece_distance(g, interval(g, 0, 0, 2), interval(g, 0, 2, 5))) ==
        doctest::Approx(0.0));

  auto s = star(3);
  auto a = interval(s, 0, 0.25, 1.0);
  auto b = interval(s, 1, 0.2, 1.0);
  CHECK(dist_value(piece_distance(s, a, b)) == doctest::Approx(0.45));
}

TEST_CASE("piece_distance empty piece errors") {
  auto g = single_edge();
  Piece empty;
  CHECK_THROWS_AS(piece_distance(g, empty, interval(g, 0, 0, 1)), InvalidInputError);
}

TEST_CASE("is_connected_piece") {
  auto g = single_edge();
  auto gap = make_piece(g, {IntervalOnEdge{0, 0, 2, true, true},
                            IntervalOnEdge{0, 3, 5, true, true}});
  CHECK_FALSE(is_connected_piece(g, gap));

  auto s = star(3);
  auto joined = make_piece(s, {IntervalOnEdge{0, 0, 0.5, true, true},
                               IntervalOnEdge{1, 0, 0.5, true, true}});
  CHECK(is_connected_piece(s, joined));
  auto open_center = make_piece(s, {IntervalOnEdge{0, 0, 0.5, true, true},
                                    IntervalOnEdge{1, 0, 0.5, false, true}});
  CHECK_FALSE(is_connected_piece(s, open_center));

  Piece empty;
  CHECK(is_connected_piece(g, empty));
}

TEST_CASE("tree_path examples") {
  auto g = single_edge();
  auto p = tree_path(g, PointRef::interior(0, 2.0), PointRef::interior(0, 7.0));
  REQUIRE(p.intervals.size() == 1);
  CHECK(p.intervals[0].start == doctest::Approx(2.0));
  CHECK(p.intervals[0].end == doctest::Approx(7.0));
  CHECK(p.total_length() == doctest::Approx(5.0));

  auto s = star(3);
  auto leaf_to_leaf = tree_path(s, PointRef::at_vertex(1), PointRef::at_vertex(2));
  CHECK(leaf_to_leaf.total_length() == doctest::Approx(2.0));
  CHECK(piece_covers_vertex(s, leaf_to_leaf, 0));

  auto pt = tree_path(g, PointRef::interior(0, 3.0), PointRef::interior(0, 3.0));
  CHECK(pt.total_length() == doctest::Approx(0.0));
  CHECK_FALSE(pt.empty());

  CHECK_THROWS_AS(tree_path(triangle(), PointRef::at_vertex(0), PointRef::at_vertex(1)),
                  InvalidInputError);
}

TEST_CASE("nearest_in_piece_to_point examples") {
  auto g = single_edge();
  auto x = interval(g, 0, 3, 5);
  auto n1 = nearest_in_piece_to_point(g, x, PointRef::interior(0, 8.0));
  CHECK(points_equal(g, n1, PointRef::interior(0, 5.0)));

  auto inside = nearest_in_piece_to_point(g, x, PointRef::interior(0, 4.0));
  CHECK(points_equal(g, inside, PointRef::interior(0, 4.0)));

  auto s = star(3);
  auto xs = interval(s, 0, 0.5, 1.0);
  auto n2 = nearest_in_piece_to_point(s, xs, PointRef::at_vertex(2));
  CHECK(points_equal(s, n2, PointRef::interior(0, 0.5)));
}

TEST_CASE("nearest_in_piece_to_point rejects open or disconnected pieces") {
  auto g = single_edge();
  CHECK_THROWS_AS(
      nearest_in_piece_to_point(g, interval(g, 0, 3, 5, false, true), PointRef::interior(0, 8.0)),
      InvalidInputError);
  auto gap = make_piece(g, {IntervalOnEdge{0, 0, 2, true, true},
                            IntervalOnEdge{0, 3, 5, true, true}});
  CHECK_THROWS_AS(nearest_in_piece_to_point(g, gap, PointRef::interior(0, 8.0)),
                  InvalidInputError);
}

TEST_CASE("nearest_in_piece_to_piece examples") {
  auto g = single_edge();
  auto n = nearest_in_piece_to_piece(g, interval(g, 0, 0, 2), interval(g, 0, 5, 7));
  CHECK(points_equal(g, n, PointRef::interior(0, 2.0)));

  auto s = star(3);
  auto n2 = nearest_in_piece_to_piece(s, interval(s, 0, 0.5, 1.0), interval(s, 1, 0.5, 1.0));
  CHECK(points_equal(s, n2, PointRef::interior(0, 0.5)));

  CHECK_THROWS_AS(nearest_in_piece_to_piece(g, interval(g, 0, 0, 3), interval(g, 0, 2, 5)),
                  InvalidInputError);
}

TEST_CASE("nearest_in_piece_to_piece agrees with point projections") {
  Rng rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    auto g = gctest::random_tree(rng, gctest::uniform_int(rng, 4, 9));
    auto x = gctest::random_closed_connected_piece(rng, g, 0.5);
    auto r = gctest::random_closed_connected_piece(rng, g, 0.5);
    if (pieces_intersect(g, x, r)) continue;
    auto xstar = nearest_in_piece_to_piece(g, x, r);
    for (int k = 0; k < 10; ++k) {
      // random point of r: probe a random interval position
      const auto& iv = r.intervals[static_cast<std::size_t>(
          gctest::uniform_int(rng, 0, static_cast<int>(r.intervals.size()) - 1))];
      double t = gctest::uniform(rng, iv.start, iv.end);
      PointRef rp = canonical_point(g, iv.edge, t);
      auto via_point = nearest_in_piece_to_point(g, x, rp);
      CHECK(points_equal(g, xstar, via_point));
    }
  }
}

TEST_CASE("s_neighborhood on a path") {
  auto g = single_edge();
  auto nb = s_neighborhood(g, interval(g, 0, 4, 6), 1.0);
  REQUIRE(nb.intervals.size() == 1);
  CHECK(nb.intervals[0].start == doctest::Approx(3.0));
  CHECK(nb.intervals[0].end == doctest::Approx(7.0));
  CHECK_FALSE(nb.intervals[0].closed_start);
  CHECK_FALSE(nb.intervals[0].closed_end);

  // clipped at the graph boundary
  auto nb2 = s_neighborhood(g, interval(g, 0, 0, 1), 2.0);
  REQUIRE(nb2.intervals.size() == 1);
  CHECK(nb2.intervals[0].start == doctest::Approx(0.0));
  CHECK(nb2.intervals[0].closed_start);
  CHECK(nb2.intervals[0].end == doctest::Approx(3.0));
  CHECK_FALSE(nb2.intervals[0].closed_end);
}

TEST_CASE("s_neighborhood on a star matches distance sampling") {
  auto s = star(3);
  auto a = interval(s, 0, 0.5, 1.0);
  auto nb = s_neighborhood(s, a, 0.7);
  // expected: all of e0, center, and (0, 0.2) on e1 and e2
  for (int e = 0; e < 3; ++e) {
    for (double t : gctest::probe_offsets(s, e, 100)) {
      auto d = piece_distance(s, piece_from_point(s, canonical_point(s, e, t)), a);
      REQUIRE(d.finite);
      if (std::fabs(d.value - 0.7) < 1e-6) continue;  // boundary-insensitive probe
      bool inside = d.value < 0.7;
      CHECK(piece_contains_point(s, nb, canonical_point(s, e, t)) == inside);
    }
  }
  CHECK(piece_covers_vertex(s, nb, 0));
}

TEST_CASE("subtract examples") {
  auto g = single_edge();
  auto cut = subtract(g, interval(g, 0, 4, 6));
  const auto& ranges = cut.live_ranges(0);
  REQUIRE(ranges.size() == 2);
  CHECK(ranges[0].closed_lo);
  CHECK_FALSE(ranges[0].closed_hi);
  CHECK(ranges[0].hi == doctest::Approx(4.0));
  CHECK_FALSE(ranges[1].closed_lo);
  CHECK(ranges[1].closed_hi);

  // subtracting the empty piece is the identity
  Piece empty;
  auto same = subtract(g, empty);
  CHECK(same.fully_live());

  // removing a closed subtree piece from a tree leaves a forest
  auto s = star(3);
  auto sub = subtract(s, interval(s, 0, 0, 0.5));  // contains the center
  CHECK(is_acyclic(sub));
  ComponentMap comps(sub);
  CHECK(comps.count() == 3);  // e0 remainder + e1 + e2 (center deleted)
  CHECK_FALSE(sub.vertex_live(0));
}

TEST_CASE("delete_vertices examples") {
  auto t = triangle();
  auto cut = delete_vertices(t, {0});
  CHECK(is_acyclic(cut));

  auto s = star(3);
  auto broken = delete_vertices(s, {0});
  ComponentMap comps(broken);
  CHECK(comps.count() == 3);

  auto same = delete_vertices(s, {});
  CHECK(same.fully_live());

  CHECK_THROWS_AS(delete_vertices(s, {99}), InvalidInputError);
}

TEST_CASE("fvs and circuit rank") {
  Rng rng(11);
  auto tree = gctest::random_tree(rng, 8);
  CHECK(fvs(tree).empty());
  CHECK(circuit_rank(tree) == 0);

  auto t = triangle();
  CHECK(fvs(t).size() == 1);
  CHECK(circuit_rank(t) == 1);

  // two disjoint triangles: no single vertex suffices
  MetricGraph two({0, 1, 2, 3, 4, 5},
                  {EdgeRecord{0, 0, 1, 1}, EdgeRecord{1, 1, 2, 1}, EdgeRecord{2, 2, 0, 1},
                   EdgeRecord{3, 3, 4, 1}, EdgeRecord{4, 4, 5, 1}, EdgeRecord{5, 5, 3, 1}});
  for (int v : two.live_vertices()) {
    CHECK_FALSE(is_acyclic(delete_vertices(two, {v})));
  }
  CHECK(fvs(two).size() == 2);
  CHECK(circuit_rank(two) == 2);

  // theta graph: 2 hubs joined by 3 internally subdivided paths
  MetricGraph theta({0, 1, 2, 3, 4},
                    {EdgeRecord{0, 0, 2, 1}, EdgeRecord{1, 2, 1, 1}, EdgeRecord{2, 0, 3, 1},
                     EdgeRecord{3, 3, 1, 1}, EdgeRecord{4, 0, 4, 1}, EdgeRecord{5, 4, 1, 1}});
  CHECK(circuit_rank(theta) == 6 - 5 + 1);
  CHECK(static_cast<int>(fvs(theta).size()) <= circuit_rank(theta));

  // parallel edges form a cycle
  MetricGraph par({0, 1}, {EdgeRecord{0, 0, 1, 1}, EdgeRecord{1, 0, 1, 1}});
  CHECK(circuit_rank(par) == 1);
  CHECK(fvs(par).size() == 1);
}

TEST_CASE("metric axioms hold on random samples") {
  Rng rng(42);
  for (int g_trial = 0; g_trial < 10; ++g_trial) {
    auto g = gctest::random_graph_with_cycles(rng, 7, gctest::uniform_int(rng, 0, 2));
    for (int t = 0; t < 100; ++t) {
      auto p = gctest::random_point(rng, g);
      auto q = gctest::random_point(rng, g);
      auto r = gctest::random_point(rng, g);
      auto dpq = shortest_distance(g, p, q);
      auto dqp = shortest_distance(g, q, p);
      CHECK(dpq.finite == dqp.finite);
      if (dpq.finite) CHECK(dpq.value == doctest::Approx(dqp.value).epsilon(1e-12));
      CHECK((shortest_distance(g, p, p).value == doctest::Approx(0.0)));
      auto dpr = shortest_distance(g, p, r);
      auto drq = shortest_distance(g, r, q);
      if (dpr.finite && drq.finite) {
        REQUIRE(dpq.finite);
        CHECK(dpq.value <= dpr.value + drq.value + 1e-9);
      }
      if (dpq.finite && dpq.value > 1e-9) CHECK_FALSE(points_equal(g, p, q));
    }
  }
}

TEST_CASE("lemma: projection decomposes distances on trees") {
  Rng rng(1234);
  for (int trial = 0; trial < 60; ++trial) {
    auto g = gctest::random_tree(rng, gctest::uniform_int(rng, 3, 10));
    auto x = gctest::random_closed_connected_piece(rng, g);
    auto r = gctest::random_point(rng, g);
    auto xstar = nearest_in_piece_to_point(g, x, r);
    auto dxr = shortest_distance(g, xstar, r);
    REQUIRE(dxr.finite);
    for (int k = 0; k < 20; ++k) {
      const auto& iv = x.intervals[static_cast<std::size_t>(
          gctest::uniform_int(rng, 0, static_cast<int>(x.intervals.size()) - 1))];
      auto y = canonical_point(g, iv.edge, gctest::uniform(rng, iv.start, iv.end));
      auto dyr = shortest_distance(g, y, r).value;
      auto dyx = shortest_distance(g, y, xstar).value;
      CHECK(std::fabs(dyr - (dyx + dxr.value)) <= 1e-9);
    }
  }
}

TEST_CASE("subtracting an s-neighborhood leaves distant components") {
  Rng rng(321);
  for (int trial = 0; trial < 40; ++trial) {
    auto g = gctest::random_forest(rng, gctest::uniform_int(rng, 1, 2), 7);
    auto a = gctest::random_closed_connected_piece(rng, g, 0.6);
    double s = gctest::uniform(rng, 0.1, 0.8);
    auto rest = subtract(g, s_neighborhood(g, a, s));
    CHECK(is_acyclic(rest));
    ComponentMap comps(rest);
    for (int c = 0; c < comps.count(); ++c) {
      auto piece = comps.component_piece(rest, c);
      if (piece.empty()) continue;
      auto d = piece_distance(g, piece, a);
      if (d.finite) CHECK(d.value >= s - 1e-9);
    }
  }
}

TEST_CASE("piece canonicalization merges per the closed-touch rule") {
  auto g = single_edge();
  auto merged = make_piece(g, {IntervalOnEdge{0, 0, 2, true, true},
                               IntervalOnEdge{0, 2, 5, false, true}});
  REQUIRE(merged.intervals.size() == 1);
  auto split = make_piece(g, {IntervalOnEdge{0, 0, 2, true, false},
                              IntervalOnEdge{0, 2, 5, false, true}});
  REQUIRE(split.intervals.size() == 2);
}
