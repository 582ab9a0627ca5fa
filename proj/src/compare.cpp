#include "loglin/compare.hpp"

#include <algorithm>
#include <future>
#include <thread>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "loglin/feature_algebra.hpp"
#include "loglin/partition.hpp"

namespace loglin {

namespace {

using BigFloat = boost::multiprecision::cpp_bin_float_50;

void sort_unique(std::vector<PairFeature>& v) {
  std::sort(v.begin(), v.end(), [](const PairFeature& a, const PairFeature& b) {
    return canonical_less(a, b);
  });
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

void check_same_domain(const StructureModel& F, const StructureModel& G) {
  if (F.domain != G.domain)
    throw ValidationError("models are defined over different domains");
}

}  // namespace

double ConfusionMatrix::normalized_distance() const {
  if (total == 0) return 0.0;
  return static_cast<double>(BigFloat(distance()) / BigFloat(total));
}

Count fc_total(const DomainSpec& domain) {
  const std::size_t n = domain.n_vars();
  Count sum = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Count prod = 1;
      for (std::size_t k = 0; k < n; ++k)
        if (k != i && k != j) prod *= domain.card(k);
      sum += prod;
    }
  return sum;
}

std::vector<PairFeature> build_htp(const StructureModel& F,
                                   const StructureModel& G, VarPair pair) {
  check_same_domain(F, G);
  std::vector<PairFeature> out;
  for (const Feature& f : F.features) {
    if (!scope_contains_pair(f, pair)) continue;
    for (const Feature& g : G.features) {
      auto merged = intersect_fc(f, g, pair, F.domain);
      if (merged) out.push_back(std::move(*merged));
    }
  }
  sort_unique(out);
  return out;
}

std::vector<PairFeature> build_hfn(const StructureModel& F,
                                   const StructureModel& G, VarPair pair,
                                   const ComparatorConfig& cfg) {
  check_same_domain(F, G);
  std::vector<PairFeature> out;

  for (const Feature& f : F.features) {
    if (!scope_contains_pair(f, pair)) continue;
    const PairFeature fp = strip_pair(f, pair);

    // Classify every g: a g that already covers all of f kills f's
    // contribution; a g with no overlap subtracts nothing; the rest each
    // yield a difference set to intersect.
    bool covered = false;
    std::vector<DiffResult> diffs;
    for (const Feature& g : G.features) {
      DiffResult d = diff_fc(f, g, pair, F.domain);
      if (d.kind == DiffKind::Empty) {
        covered = true;
        break;
      }
      if (d.kind == DiffKind::DifferenceSet) diffs.push_back(std::move(d));
    }
    if (covered) continue;

    if (diffs.empty()) {
      out.push_back(fp);
      continue;
    }

    Count terms = 1;
    for (const DiffResult& d : diffs) terms *= d.features.size();
    if (terms > cfg.max_union_terms)
      throw CapExceeded(pair.i, pair.j, to_string(f),
                        terms.str() + " cross-product terms exceed the cap of " +
                            std::to_string(cfg.max_union_terms));

    // One selection per element of the cross product; incompatible selections
    // denote empty intersections and are skipped.
    std::vector<std::size_t> idx(diffs.size(), 0);
    for (;;) {
      Feature merged = fp.ctx();
      bool ok = true;
      for (std::size_t k = 0; k < diffs.size() && ok; ++k) {
        const Feature& d = diffs[k].features[idx[k]].ctx();
        if (!compatible(merged, d))
          ok = false;
        else
          merged = union_features(merged, d);
      }
      if (ok) out.emplace_back(pair, std::move(merged));

      std::size_t k = 0;
      while (k < idx.size() && ++idx[k] == diffs[k].features.size()) {
        idx[k] = 0;
        ++k;
      }
      if (k == idx.size()) break;
    }
  }
  sort_unique(out);
  return out;
}

ConfusionMatrix confusion_matrix(const StructureModel& F,
                                 const StructureModel& G,
                                 const ComparatorConfig& cfg) {
  check_same_domain(F, G);
  const std::size_t n = F.domain.n_vars();

  std::vector<VarPair> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

  auto pair_counts = [&](const VarPair& pair) -> PairCounts {
    Count pair_total = 1;
    for (std::size_t k = 0; k < n; ++k)
      if (k != pair.i && k != pair.j) pair_total *= F.domain.card(k);

    PairCounts c;
    c.tp = coverage_cardinality(build_htp(F, G, pair), pair, F.domain);
    c.fn = coverage_cardinality(build_hfn(F, G, pair, cfg), pair, F.domain);
    c.fp = coverage_cardinality(build_hfn(G, F, pair, cfg), pair, F.domain);
    c.tn = pair_total - c.tp - c.fn - c.fp;
    return c;
  };

  // Independent per-pair jobs; results are joined in fixed pair order.
  std::vector<PairCounts> results(pairs.size());
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (hw > 1 && pairs.size() > 1) {
    std::vector<std::future<PairCounts>> jobs;
    jobs.reserve(pairs.size());
    for (const VarPair& p : pairs)
      jobs.push_back(std::async(std::launch::async | std::launch::deferred,
                                pair_counts, p));
    for (std::size_t k = 0; k < jobs.size(); ++k) results[k] = jobs[k].get();
  } else {
    for (std::size_t k = 0; k < pairs.size(); ++k)
      results[k] = pair_counts(pairs[k]);
  }

  ConfusionMatrix cm;
  cm.tp = cm.fp = cm.fn = cm.tn = 0;
  cm.total = fc_total(F.domain);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    cm.tp += results[k].tp;
    cm.fp += results[k].fp;
    cm.fn += results[k].fn;
    cm.tn += results[k].tn;
    if (cfg.emit_per_pair) cm.per_pair.emplace_back(pairs[k], results[k]);
  }
  return cm;
}

DistanceResult distance(const StructureModel& F, const StructureModel& G,
                        const ComparatorConfig& cfg) {
  ConfusionMatrix cm = confusion_matrix(F, G, cfg);
  return {cm.distance(), cm.normalized_distance()};
}

}  // namespace loglin
