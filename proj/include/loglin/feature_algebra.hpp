#pragma once

#include <optional>
#include <vector>

#include "loglin/types.hpp"

namespace loglin {

enum class DiffKind { Empty, WholeOfF, DifferenceSet };

// Result of subtracting one feature's FC context set from another's:
// Empty       -- nothing of f survives,
// WholeOfF    -- g removes nothing, the difference is all of X^ij(f),
// DifferenceSet -- a non-empty set of pair-relative features with pairwise
//                  disjoint FC sets whose union is exactly the difference.
struct DiffResult {
  DiffKind kind = DiffKind::Empty;
  std::vector<PairFeature> features;  // populated only for DifferenceSet
};

// Merge of two features that agree on every shared variable; throws
// IncompatibleAssignments (with the first conflicting variable) otherwise.
Feature union_features(const Feature& f, const Feature& g);

// Merge of pair-relative features sharing `pair`; values of X_i/X_j stay
// unassigned (they are irrelevant to the FC set denoted).
PairFeature union_over_pair(const std::vector<PairFeature>& hs, VarPair pair);

// Number of FC contexts covered by p: product of cardinalities of the
// variables outside {i,j} and outside p's scope (1 if fully assigned).
Count fc_cardinality(const PairFeature& p, const DomainSpec& domain);

// Every assignment of `inner` appears identically in `outer`.
bool subset_of(const Feature& inner, const Feature& outer);

// No variable assigned conflicting values across a and b.
bool compatible(const Feature& a, const Feature& b);

// X^ij(f) ∩ X^ij(g) as a single pair-relative feature; absent when the
// intersection is empty (pair not in both scopes, or conflicting values
// outside the pair).
std::optional<PairFeature> intersect_fc(const Feature& f, const Feature& g,
                                        VarPair pair, const DomainSpec& domain);
// Pair-relative operand form (both features already have the pair in scope).
std::optional<PairFeature> intersect_fc(const PairFeature& f,
                                        const PairFeature& g,
                                        const DomainSpec& domain);

// X^ij(f) \ X^ij(g). The Empty conditions are tested before the WholeOfF
// conditions (they overlap when the pair is missing from f's scope, and Empty
// wins). In the non-trivial case, for each g-only variable X_k in ascending
// index order the result holds one feature per value of X_k other than
// X_k(g), carrying f's assignments plus g's assignments on earlier g-only
// variables; members are mutually FC-disjoint.
DiffResult diff_fc(const Feature& f, const Feature& g, VarPair pair,
                   const DomainSpec& domain);
DiffResult diff_fc(const PairFeature& f, const PairFeature& g,
                   const DomainSpec& domain);

}  // namespace loglin
