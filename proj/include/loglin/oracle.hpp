#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "loglin/compare.hpp"
#include "loglin/types.hpp"

namespace loglin::oracle {

// A dependence/independence query: pair (i,j), an assigned context x_U and a
// set W of unassigned conditioning variables, with U and W disjoint subsets
// of V \ {i,j}. The fully-contextualized case is U = V \ {i,j}, W = empty;
// the marginal case is U = W = empty.
struct Triplet {
  VarPair pair;
  Feature context;                     // x_U
  std::vector<std::size_t> free_vars;  // W
};

// All complete assignments to V \ {i,j}, lexicographic by variable then
// value. Materializing more than `guard` contexts raises GuardExceeded.
std::vector<FCContext> enumerate_fc_contexts(VarPair pair,
                                             const DomainSpec& domain,
                                             std::uint64_t guard = 10'000'000);

// Streaming form of the above (no materialization, no guard).
void for_each_fc_context(VarPair pair, const DomainSpec& domain,
                         const std::function<void(const FCContext&)>& fn);

// Some feature has both pair variables in scope and all its remaining
// assignments matching ctx.
bool is_dependent_fc(const StructureModel& F, VarPair pair,
                     const FCContext& ctx);

// Expands W over all value combinations; each expanded query holds iff no
// feature compatible with the context contains both pair variables. Returns
// the conjunction over the expansion.
bool is_independent_general(const StructureModel& F, const Triplet& t);

// X^ij(F) by enumeration: every FC context on which F makes the pair
// dependent.
std::vector<FCContext> reduced_dependency_model(const StructureModel& F,
                                                VarPair pair,
                                                std::uint64_t guard = 10'000'000);

// Census of all dependence assertions over every pair, bucketed by the sizes
// of the assigned context U and the free set W.
struct CensusRow {
  std::size_t context_vars;  // |U|
  std::size_t free_vars;     // |W|
  Count count;
};
struct Census {
  std::vector<CensusRow> rows;  // (0,w) by w, then (u,0) by u>=1, then mixed
  Count total;
};
Census complete_triplet_census(const DomainSpec& domain,
                               const Count& bound = Count(10'000'000));

// Membership-tests every FC context of every pair against both models'
// reduced dependency models and tallies literally. The guard bounds
// (contexts x features) membership work.
ConfusionMatrix brute_confusion_matrix(const StructureModel& F,
                                       const StructureModel& G,
                                       std::uint64_t guard = 10'000'000);

}  // namespace loglin::oracle
