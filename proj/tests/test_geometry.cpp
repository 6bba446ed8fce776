#include "doctest.h"

#include <random>

#include "graphcake/geometry.hpp"

using namespace graphcake;

namespace {

// Reference membership for a list of flagged intervals.
bool in_list(const std::vector<Flagged>& list, double t) {
  for (const Flagged& f : list) {
    if (flagged_contains(f, t)) return true;
  }
  return false;
}

Flagged rand_interval(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coord(0, 20);
  std::uniform_int_distribution<int> flag(0, 1);
  double a = coord(rng) * 0.05;
  double b = coord(rng) * 0.05;
  if (a > b) std::swap(a, b);
  Flagged f{a, b, flag(rng) == 1, flag(rng) == 1};
  if (approx_eq(a, b)) f.closed_lo = f.closed_hi = true;
  return f;
}

}  // namespace

TEST_CASE("flagged basics") {
  Flagged f{0.0, 1.0, true, false};
  CHECK(flagged_valid(f));
  CHECK(flagged_contains(f, 0.0));
  CHECK(flagged_contains(f, 0.5));
  CHECK_FALSE(flagged_contains(f, 1.0));
  CHECK_FALSE(flagged_valid(Flagged{0.5, 0.5, true, false}));
  CHECK(flagged_valid(Flagged{0.5, 0.5, true, true}));
}

TEST_CASE("overlap at shared endpoint requires both sides closed") {
  Flagged a{0.0, 2.0, true, true};
  Flagged b{2.0, 5.0, true, true};
  Flagged c{2.0, 5.0, false, true};
  CHECK(flagged_overlap(a, b));
  CHECK_FALSE(flagged_overlap(a, c));
  CHECK(flagged_overlap(Flagged{0.0, 2.0, true, false}, Flagged{1.9, 5.0, false, true}));
}

TEST_CASE("union merges only across a closed meeting point") {
  auto u1 = flagged_union({{0.0, 2.0, true, true}, {2.0, 5.0, false, true}});
  REQUIRE(u1.size() == 1);
  CHECK(u1[0].lo == doctest::Approx(0.0));
  CHECK(u1[0].hi == doctest::Approx(5.0));

  auto u2 = flagged_union({{0.0, 2.0, true, false}, {2.0, 5.0, false, true}});
  REQUIRE(u2.size() == 2);
}

TEST_CASE("subtract complements flags at cut points") {
  // [0,10] minus [4,6] -> [0,4) and (6,10]
  auto rem = flagged_subtract({{0.0, 10.0, true, true}}, {{4.0, 6.0, true, true}});
  REQUIRE(rem.size() == 2);
  CHECK(rem[0].lo == doctest::Approx(0.0));
  CHECK(rem[0].hi == doctest::Approx(4.0));
  CHECK(rem[0].closed_lo);
  CHECK_FALSE(rem[0].closed_hi);
  CHECK_FALSE(rem[1].closed_lo);
  CHECK(rem[1].closed_hi);

  // removing an open interval leaves closed ends
  auto rem2 = flagged_subtract({{0.0, 10.0, true, true}}, {{4.0, 6.0, false, false}});
  REQUIRE(rem2.size() == 2);
  CHECK(rem2[0].closed_hi);
  CHECK(rem2[1].closed_lo);

  // single point survives: [0,5] minus [0,2) u (2,5]
  auto rem3 = flagged_subtract({{0.0, 5.0, true, true}},
                               {{0.0, 2.0, true, false}, {2.0, 5.0, false, true}});
  REQUIRE(rem3.size() == 1);
  CHECK(rem3[0].lo == doctest::Approx(2.0));
  CHECK(rem3[0].hi == doctest::Approx(2.0));
}

TEST_CASE("interval algebra agrees with membership sampling") {
  std::mt19937_64 rng(20250810);
  for (int trial = 0; trial < 400; ++trial) {
    std::vector<Flagged> base, cuts;
    for (int i = 0; i < 3; ++i) base.push_back(rand_interval(rng));
    for (int i = 0; i < 3; ++i) cuts.push_back(rand_interval(rng));
    auto ubase = flagged_union(base);
    auto diff = flagged_subtract(ubase, cuts);
    auto inter = flagged_intersect(ubase, flagged_union(cuts));
    // Probe at quarter-step grid plus interval endpoints.
    std::vector<double> probes;
    for (int i = 0; i <= 80; ++i) probes.push_back(i * 0.0125);
    for (const auto& f : base) {
      probes.push_back(f.lo);
      probes.push_back(f.hi);
    }
    for (const auto& f : cuts) {
      probes.push_back(f.lo);
      probes.push_back(f.hi);
    }
    for (double t : probes) {
      const bool b = in_list(ubase, t);
      const bool c = in_list(cuts, t);
      CHECK(in_list(diff, t) == (b && !c));
      CHECK(in_list(inter, t) == (b && c));
    }
  }
}
