#pragma once

#include <vector>

#include "loglin/types.hpp"

namespace loglin {

// Same FC coverage as the input feature set, but with pairwise-disjoint
// per-member FC sets, so the coverage cardinality is a plain sum.
struct PartitionModel {
  VarPair pair;
  std::vector<PairFeature> members;
};

// Rewrites H (pair-relative features, duplicates tolerated) into a partition
// model: seed with the canonically smallest feature, then reduce every further
// feature by subtracting each accumulated member from each of its current
// fragments; surviving fragments join the partition.
PartitionModel partition(std::vector<PairFeature> H, VarPair pair,
                         const DomainSpec& domain);

// |X^ij(H)| = sum of member cardinalities of partition(H).
Count coverage_cardinality(const std::vector<PairFeature>& H, VarPair pair,
                           const DomainSpec& domain);

}  // namespace loglin
