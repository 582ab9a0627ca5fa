#include "loglin/partition.hpp"

#include <algorithm>

#include "loglin/feature_algebra.hpp"

namespace loglin {

PartitionModel partition(std::vector<PairFeature> H, VarPair pair,
                         const DomainSpec& domain) {
  for (const PairFeature& h : H) {
    if (h.pair() != pair)
      throw ValidationError("partition input feature relative to a different pair");
    validate_feature(h.ctx(), domain, "partition input");
  }

  // Dedup (a duplicate is subsumed and would vanish anyway), then order
  // canonically: the head becomes the seed, and iteration is deterministic.
  std::sort(H.begin(), H.end(),
            [](const PairFeature& a, const PairFeature& b) {
              return canonical_less(a, b);
            });
  H.erase(std::unique(H.begin(), H.end()), H.end());

  PartitionModel P{pair, {}};
  if (H.empty()) return P;
  P.members.push_back(H.front());

  for (std::size_t hi = 1; hi < H.size(); ++hi) {
    std::vector<PairFeature> fragments{H[hi]};
    for (std::size_t pi = 0; pi < P.members.size() && !fragments.empty(); ++pi) {
      std::vector<PairFeature> reduced;
      for (const PairFeature& frag : fragments) {
        DiffResult d = diff_fc(frag, P.members[pi], domain);
        switch (d.kind) {
          case DiffKind::Empty:
            break;  // fragment fully covered; drop it
          case DiffKind::WholeOfF:
            reduced.push_back(frag);
            break;
          case DiffKind::DifferenceSet:
            reduced.insert(reduced.end(),
                           std::make_move_iterator(d.features.begin()),
                           std::make_move_iterator(d.features.end()));
            break;
        }
      }
      fragments = std::move(reduced);
    }
    P.members.insert(P.members.end(),
                     std::make_move_iterator(fragments.begin()),
                     std::make_move_iterator(fragments.end()));
  }
  return P;
}

Count coverage_cardinality(const std::vector<PairFeature>& H, VarPair pair,
                           const DomainSpec& domain) {
  Count sum = 0;
  for (const PairFeature& p : partition(H, pair, domain).members)
    sum += fc_cardinality(p, domain);
  return sum;
}

}  // namespace loglin
