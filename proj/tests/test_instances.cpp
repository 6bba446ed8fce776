#include "doctest.h"

#include "graphcake/errors.hpp"
#include "graphcake/instances.hpp"
#include "graphcake/json_io.hpp"
#include "graphcake/mms.hpp"
#include "support.hpp"

using namespace graphcake;
using gctest::Rng;

TEST_CASE("cycle counterexample case 1: n=2, r=2") {
  auto doc = gen_cycle_counterexample(2, 2, 1.0, 0.05);
  CHECK(doc.meta.at("case") == 1);
  CHECK(doc.graph.edges().size() == 4);  // two 2-edge cycles
  CHECK(doc.agents.size() == 2);
  // one valuable cycle worth 2 per agent, one worthless
  for (const InstanceAgent& a : doc.agents) {
    CHECK(a.valuation.total_value() == doctest::Approx(2.0));
    REQUIRE(a.partition.has_value());
    CHECK(a.partition->size() == 2);  // N-1 = 2n-2 = 2 parts
    for (const Piece& part : *a.partition) {
      CHECK(a.valuation.piece_value(part) == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
  // certified partitions validate at separation s
  for (const AgentPartition& p : doc.declared_partitions()) {
    CHECK_NOTHROW(validate_partition(doc.graph, p));
  }
}

TEST_CASE("cycle counterexample case 2: n=4, r=1 (the square)") {
  auto doc = gen_cycle_counterexample(4, 1, 1.0, 0.05);
  CHECK(doc.meta.at("case") == 2);
  CHECK(doc.graph.edges().size() == 4);  // one 4-segment cycle
  for (const EdgeRecord& e : doc.graph.edges()) {
    CHECK(e.length == doctest::Approx(1.05));  // s + eps per side
  }
  for (const InstanceAgent& a : doc.agents) {
    REQUIRE(a.partition.has_value());
    CHECK(a.partition->size() == 4);  // N-1 = n+r-1 = 4
    for (const Piece& part : *a.partition) {
      CHECK(a.valuation.piece_value(part) == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("cycle counterexample case 1 with extra worthless cycles: n=3, r=5") {
  auto doc = gen_cycle_counterexample(3, 5, 1.0, 0.05);
  CHECK(doc.graph.edges().size() == 10);
  for (const InstanceAgent& a : doc.agents) {
    REQUIRE(a.partition.has_value());
    CHECK(a.partition->size() == 4);  // N-1 = 2n-2 = 4
    CHECK(a.valuation.total_value() == doctest::Approx(4.0));  // 2 valuable cycles
  }
}

TEST_CASE("cycle counterexample parameter validation") {
  CHECK_THROWS_AS(gen_cycle_counterexample(2, 2, 1.0, 0.5), InvalidInputError);  // eps > s/(4n)
  CHECK_THROWS_AS(gen_cycle_counterexample(0, 2, 1.0, 0.01), InvalidInputError);
  CHECK_THROWS_AS(gen_cycle_counterexample(2, 0, 1.0, 0.01), InvalidInputError);
  CHECK_THROWS_AS(gen_cycle_counterexample(2, 2, -1.0, 0.01), InvalidInputError);
}

TEST_CASE("positive-value bound on the generated instances") {
  auto c1 = gen_cycle_counterexample(2, 2, 1.0, 0.05);
  CHECK(check_positive_value_bound(c1) == 1);  // n-1

  auto degenerate = gen_cycle_counterexample(1, 1, 1.0, 0.05);
  CHECK(check_positive_value_bound(degenerate) == 1);  // single agent is served
}

TEST_CASE("mms_discretized confirms MMS >= 1 on the case-1 instance") {
  auto doc = gen_cycle_counterexample(2, 2, 1.0, 0.05);
  auto r = mms_discretized(doc.graph, doc.agents[0].valuation, 2, doc.separation, 0.2);
  CHECK(r.value >= 0.95);
  CHECK(r.value <= 1.0 + 1e-9);
}

TEST_CASE("random forest generator is deterministic and certified") {
  auto a = gen_random_forest_instance(42, 2, 8, 2, 0.3);
  auto b = gen_random_forest_instance(42, 2, 8, 2, 0.3);
  CHECK(canonical_dump(instance_to_json(a)) == canonical_dump(instance_to_json(b)));
  auto c = gen_random_forest_instance(43, 2, 8, 2, 0.3);
  CHECK(canonical_dump(instance_to_json(a)) != canonical_dump(instance_to_json(c)));

  // single agent on a nonempty tree is always feasible
  CHECK_NOTHROW(gen_random_forest_instance(1, 1, 4, 1, 0.2));
  // absurd demands fail loudly
  CHECK_THROWS_AS(gen_random_forest_instance(1, 1, 2, 6, 5.0), InvalidInputError);
}

TEST_CASE("generator partitions pass the invariant checker across seeds") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    InstanceDoc doc;
    try {
      doc = gen_random_forest_instance(seed, 1 + static_cast<int>(seed % 3), 9,
                                       2 + static_cast<int>(seed % 2), 0.25);
    } catch (const InvalidInputError&) {
      continue;
    }
    for (const AgentPartition& p : doc.declared_partitions()) {
      CHECK_NOTHROW(validate_partition(doc.graph, p));
      CHECK(p.parts.size() == doc.agents.size());
    }
  }
}

TEST_CASE("instance JSON round-trips structurally") {
  Rng rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    InstanceDoc doc;
    try {
      doc = gen_random_forest_instance(trial, 1 + trial % 2, 7, 2, 0.2);
    } catch (const InvalidInputError&) {
      continue;
    }
    auto j = instance_to_json(doc);
    auto doc2 = instance_from_json(j);
    auto j2 = instance_to_json(doc2);
    CHECK(j == j2);
    CHECK(canonical_dump(j) == canonical_dump(j2));
  }
  // the cycle instances round-trip too
  auto doc = gen_cycle_counterexample(3, 2, 1.0, 0.05);
  auto j = instance_to_json(doc);
  CHECK(instance_to_json(instance_from_json(j)) == j);
}

TEST_CASE("allocation JSON round-trips") {
  auto doc = gen_random_forest_instance(5, 1, 6, 2, 0.2);
  auto alloc = allocate_forest(doc.graph, doc.declared_partitions(), doc.separation);
  auto j = allocation_to_json(alloc);
  auto alloc2 = allocation_from_json(doc.graph, j);
  CHECK(allocation_to_json(alloc2) == j);
}
