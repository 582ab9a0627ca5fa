#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "loglin/types.hpp"

namespace loglin {

struct ComparatorConfig {
  // Cap on the cross-product expansion per (feature, pair) in the
  // false-negative construction; exceeding it raises CapExceeded.
  std::uint64_t max_union_terms = 1'000'000;
  bool emit_per_pair = false;
};

struct PairCounts {
  Count tp, fp, fn, tn;

  bool operator==(const PairCounts&) const = default;
};

struct ConfusionMatrix {
  Count tp, fp, fn, tn;
  Count total;  // sum over unordered pairs of the per-pair context count
  std::vector<std::pair<VarPair, PairCounts>> per_pair;  // sorted by (i,j)

  Count distance() const { return fp + fn; }
  double normalized_distance() const;
};

// Number of FC assertions: sum over unordered pairs i<j of
// prod_{k not in {i,j}} |val(X_k)|.
Count fc_total(const DomainSpec& domain);

// True-positive features for one pair: merged pair-relative forms of every
// (f,g) with the pair in both scopes and no conflicts outside the pair.
std::vector<PairFeature> build_htp(const StructureModel& F,
                                   const StructureModel& G, VarPair pair);

// False-negative features for one pair: coverage of F not covered by G.
// For each f with the pair in scope and no g covering f wholesale, the per-g
// difference sets are cross-multiplied; each mutually-compatible selection
// contributes its merge with f (f alone when nothing needs subtracting).
std::vector<PairFeature> build_hfn(const StructureModel& F,
                                   const StructureModel& G, VarPair pair,
                                   const ComparatorConfig& cfg = {});

// Exact confusion matrix over all unordered pairs; TN is the complement.
// Per-pair work runs on concurrent workers and is reduced in pair order, so
// the result is scheduling-independent.
ConfusionMatrix confusion_matrix(const StructureModel& F,
                                 const StructureModel& G,
                                 const ComparatorConfig& cfg = {});

struct DistanceResult {
  Count d;            // fp + fn
  double normalized;  // d / total, in [0,1]
};

DistanceResult distance(const StructureModel& F, const StructureModel& G,
                        const ComparatorConfig& cfg = {});

}  // namespace loglin
