#include <algorithm>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "loglin/feature_algebra.hpp"
#include "loglin/partition.hpp"
#include "loglin/types.hpp"

using namespace loglin;

TEST_CASE("two overlapping features split into disjoint members") {
  const DomainSpec d = DomainSpec::uniform(5, 2);
  const VarPair pair(0, 1);
  const std::vector<PairFeature> h = {
      strip_pair(Feature{{0, 0u}, {1, 0u}, {4, 0u}}, pair),
      strip_pair(Feature{{0, 0u}, {1, 0u}, {3, 0u}}, pair)};

  const PartitionModel p = partition(h, pair, d);
  REQUIRE(p.members.size() == 2);
  CHECK(p.members[0].ctx() == Feature{{4, 0u}});
  CHECK(p.members[1].ctx() == Feature{{3, 0u}, {4, 1u}});

  CHECK(fc_cardinality(p.members[0], d) == 4);
  CHECK(fc_cardinality(p.members[1], d) == 2);
  CHECK(coverage_cardinality(h, pair, d) == 6);
}

TEST_CASE("single or degenerate inputs") {
  const DomainSpec d = DomainSpec::uniform(5, 2);
  const VarPair pair(0, 1);
  const PairFeature lone(pair, Feature{{2, 1u}});

  CHECK(partition({lone}, pair, d).members == std::vector<PairFeature>{lone});
  CHECK(partition({}, pair, d).members.empty());
  CHECK(coverage_cardinality({}, pair, d) == 0);

  // A feature assigning only the pair covers every context.
  const PairFeature everything(pair, Feature{});
  CHECK(coverage_cardinality({everything}, pair, d) == 8);

  // Duplicates are absorbed, not double-counted.
  CHECK(coverage_cardinality({lone, lone, lone}, pair, d) ==
        coverage_cardinality({lone}, pair, d));
}

TEST_CASE("partitions are disjoint and preserve coverage") {
  testutil::Rng rng(515);
  for (int trial = 0; trial < 120; ++trial) {
    const DomainSpec d = testutil::random_domain(rng, 3, 5);
    const VarPair pair(0, 1 + rng.below(d.n_vars() - 1));
    std::vector<PairFeature> h;
    const std::size_t n = rng.below(6);
    for (std::size_t k = 0; k < n; ++k)
      h.push_back(
          strip_pair(testutil::random_feature(rng, d, d.n_vars()), pair));

    const PartitionModel p = partition(h, pair, d);

    // Same denotation as the input...
    CHECK(testutil::fc_set_union(p.members, d) == testutil::fc_set_union(h, d));

    // ...with pairwise-empty intersections, so the sizes simply add.
    Count sum = 0;
    for (const PairFeature& m : p.members) sum += fc_cardinality(m, d);
    CHECK(sum == Count(testutil::fc_set_union(h, d).size()));
    CHECK(coverage_cardinality(h, pair, d) == sum);
    for (std::size_t a = 0; a < p.members.size(); ++a)
      for (std::size_t b = a + 1; b < p.members.size(); ++b) {
        const auto sa = testutil::fc_set(p.members[a], d);
        const auto sb = testutil::fc_set(p.members[b], d);
        std::set<FCContext> overlap;
        std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(),
                              std::inserter(overlap, overlap.end()));
        CHECK(overlap.empty());
      }

    // Re-partitioning a partition changes nothing about its count.
    CHECK(coverage_cardinality(p.members, pair, d) == sum);

    // The count is invariant under input order.
    std::vector<PairFeature> shuffled = h;
    for (std::size_t k = shuffled.size(); k > 1; --k)
      std::swap(shuffled[k - 1], shuffled[rng.below(k)]);
    CHECK(coverage_cardinality(shuffled, pair, d) == sum);
  }
}
