#include <algorithm>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "loglin/feature_algebra.hpp"
#include "loglin/oracle.hpp"
#include "loglin/types.hpp"

using namespace loglin;
using testutil::fc_set;

TEST_CASE("union of compatible features merges scopes") {
  const Feature f{{0, 1u}, {2, 0u}, {3, 1u}};
  const Feature g{{0, 1u}, {1, 0u}, {4, 0u}};
  CHECK(union_features(f, g) ==
        Feature{{0, 1u}, {1, 0u}, {2, 0u}, {3, 1u}, {4, 0u}});
  CHECK(union_features(f, f) == f);
}

TEST_CASE("union rejects conflicting values with the variable named") {
  try {
    union_features(Feature{{0, 1u}}, Feature{{0, 0u}});
    FAIL("no error raised");
  } catch (const IncompatibleAssignments& e) {
    CHECK(e.var == 0);
  }
}

TEST_CASE("union over a pair strips the pair before merging") {
  const VarPair pair(0, 2);
  const std::vector<PairFeature> hs = {
      strip_pair(Feature{{0, 1u}, {2, 0u}, {3, 1u}}, pair),
      strip_pair(Feature{{0, 0u}, {1, 0u}, {2, 1u}, {4, 0u}}, pair)};
  CHECK(union_over_pair(hs, pair).ctx() == Feature{{1, 0u}, {3, 1u}, {4, 0u}});

  CHECK(union_over_pair({hs[0]}, pair) == hs[0]);

  const std::vector<PairFeature> clash = {
      PairFeature(pair, Feature{{3, 1u}}), PairFeature(pair, Feature{{3, 0u}})};
  CHECK_THROWS_AS(union_over_pair(clash, pair), IncompatibleAssignments);
}

TEST_CASE("context-set cardinality multiplies the free cardinalities") {
  // Seven variables; X2 is binary and X5 ternary, both outside the scope.
  const DomainSpec d({2, 2, 2, 2, 2, 3, 2});
  const Feature h{{0, 0u}, {1, 0u}, {3, 1u}, {4, 0u}, {6, 1u}};
  CHECK(fc_cardinality(strip_pair(h, VarPair(0, 1)), d) == 6);

  const DomainSpec d4 = DomainSpec::uniform(4, 2);
  CHECK(fc_cardinality(PairFeature(VarPair(0, 1), Feature{{2, 0u}, {3, 0u}}),
                       d4) == 1);
  CHECK(fc_cardinality(PairFeature(VarPair(0, 1), Feature{{2, 0u}}), d4) == 2);
}

// The worked three-way comparison on six ternary variables, pair (0,1).
static const DomainSpec kTernary6 = DomainSpec::uniform(6, 3);
static const Feature kF{{0, 2u}, {1, 1u}, {2, 0u}, {5, 0u}};
static const Feature kG{{0, 0u}, {1, 1u}, {2, 0u}, {4, 1u}};

TEST_CASE("intersection merges when both scopes hold the pair and agree") {
  const auto r = intersect_fc(kF, kG, VarPair(0, 1), kTernary6);
  REQUIRE(r.has_value());
  CHECK(r->ctx() == Feature{{2, 0u}, {4, 1u}, {5, 0u}});
  CHECK(fc_cardinality(*r, kTernary6) == 3);
}

TEST_CASE("intersection is empty when a scope misses the pair") {
  const Feature no_x0{{1, 1u}, {2, 0u}, {5, 0u}};
  CHECK_FALSE(intersect_fc(no_x0, kG, VarPair(0, 1), kTernary6).has_value());
}

TEST_CASE("intersection is empty on a value conflict outside the pair") {
  const Feature f2{{0, 2u}, {1, 1u}, {2, 1u}, {5, 0u}};
  CHECK_FALSE(intersect_fc(f2, kG, VarPair(0, 1), kTernary6).has_value());
}

TEST_CASE("difference expands one variable at a time, ascending") {
  const Feature g{{0, 0u}, {1, 1u}, {2, 0u}, {3, 0u}, {4, 1u}};
  const DiffResult r = diff_fc(kF, g, VarPair(0, 1), kTernary6);
  REQUIRE(r.kind == DiffKind::DifferenceSet);
  REQUIRE(r.features.size() == 4);
  CHECK(r.features[0].ctx() == Feature{{2, 0u}, {3, 1u}, {5, 0u}});
  CHECK(r.features[1].ctx() == Feature{{2, 0u}, {3, 2u}, {5, 0u}});
  CHECK(r.features[2].ctx() == Feature{{2, 0u}, {3, 0u}, {4, 0u}, {5, 0u}});
  CHECK(r.features[3].ctx() == Feature{{2, 0u}, {3, 0u}, {4, 2u}, {5, 0u}});
  Count sum = 0;
  for (const PairFeature& m : r.features) sum += fc_cardinality(m, kTernary6);
  CHECK(sum == 8);
}

TEST_CASE("difference against an equal or covering feature is empty") {
  CHECK(diff_fc(kF, kF, VarPair(0, 1), kTernary6).kind == DiffKind::Empty);
  // g's stripped assignments are a subset of f's: everything is subtracted.
  const Feature wide{{0, 0u}, {1, 0u}, {2, 0u}};
  CHECK(diff_fc(kF, wide, VarPair(0, 1), kTernary6).kind == DiffKind::Empty);
  // f without the pair in scope has nothing to subtract from.
  const Feature no_x0{{1, 1u}, {2, 0u}};
  CHECK(diff_fc(no_x0, kG, VarPair(0, 1), kTernary6).kind == DiffKind::Empty);
}

TEST_CASE("difference keeps everything when g cannot overlap") {
  const Feature f2{{0, 2u}, {1, 1u}, {2, 1u}, {5, 0u}};
  CHECK(diff_fc(f2, kG, VarPair(0, 1), kTernary6).kind == DiffKind::WholeOfF);
  StructureModel m = make_model(kTernary6, {f2}, {});
  CHECK(oracle::reduced_dependency_model(m, VarPair(0, 1)).size() == 9);

  const Feature no_pair_g{{2, 0u}};  // C1(g) fails
  CHECK(diff_fc(kF, no_pair_g, VarPair(0, 1), kTernary6).kind ==
        DiffKind::WholeOfF);
}

TEST_CASE("set operations agree with enumeration on random instances") {
  testutil::Rng rng(2024);
  int diff_sets = 0, empties = 0, wholes = 0, intersections = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const DomainSpec d = testutil::random_domain(rng);
    const VarPair pair(0, 1 + rng.below(d.n_vars() - 1));
    const Feature f = testutil::random_feature(rng, d, d.n_vars());
    const Feature g = testutil::random_feature(rng, d, d.n_vars());
    const auto set_f = fc_set(f, pair, d);
    const auto set_g = fc_set(g, pair, d);

    // Intersection denotation, plus operand-order invariance.
    const auto isect = intersect_fc(f, g, pair, d);
    std::set<FCContext> expected_isect;
    std::set_intersection(set_f.begin(), set_f.end(), set_g.begin(),
                          set_g.end(),
                          std::inserter(expected_isect, expected_isect.end()));
    if (isect.has_value()) {
      ++intersections;
      CHECK(fc_set(*isect, d) == expected_isect);
      CHECK(fc_cardinality(*isect, d) == Count(expected_isect.size()));
    } else {
      CHECK(expected_isect.empty());
    }
    const auto isect_rev = intersect_fc(g, f, pair, d);
    CHECK(isect.has_value() == isect_rev.has_value());
    if (isect && isect_rev) CHECK(*isect == *isect_rev);

    // Difference denotation and the three-way case split.
    std::set<FCContext> expected_diff;
    std::set_difference(set_f.begin(), set_f.end(), set_g.begin(), set_g.end(),
                        std::inserter(expected_diff, expected_diff.end()));
    const DiffResult r = diff_fc(f, g, pair, d);
    switch (r.kind) {
      case DiffKind::Empty:
        ++empties;
        CHECK(expected_diff.empty());
        break;
      case DiffKind::WholeOfF:
        ++wholes;
        CHECK(expected_diff == set_f);
        CHECK_FALSE(set_f.empty());
        break;
      case DiffKind::DifferenceSet: {
        ++diff_sets;
        REQUIRE_FALSE(r.features.empty());
        CHECK(testutil::fc_set_union(r.features, d) == expected_diff);
        // Members are mutually disjoint, so cardinalities add up exactly.
        Count sum = 0;
        for (const PairFeature& m : r.features) sum += fc_cardinality(m, d);
        CHECK(sum == Count(expected_diff.size()));
        for (std::size_t a = 0; a < r.features.size(); ++a)
          for (std::size_t b = a + 1; b < r.features.size(); ++b) {
            std::set<FCContext> overlap;
            const auto sa = fc_set(r.features[a], d);
            const auto sb = fc_set(r.features[b], d);
            std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(),
                                  std::inserter(overlap, overlap.end()));
            CHECK(overlap.empty());
          }
        break;
      }
    }

    // Cardinality equals the number of enumerated completions.
    const PairFeature stripped = strip_pair(f, pair);
    CHECK(fc_cardinality(stripped, d) == Count(fc_set(stripped, d).size()));
  }
  // The sampler must actually reach every branch for the run to mean much.
  CHECK(diff_sets > 10);
  CHECK(empties > 10);
  CHECK(wholes > 10);
  CHECK(intersections > 10);
}
