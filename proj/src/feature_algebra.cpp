#include "loglin/feature_algebra.hpp"

#include <algorithm>

namespace loglin {

Feature union_features(const Feature& f, const Feature& g) {
  const auto& fs = f.assignments();
  const auto& gs = g.assignments();
  std::vector<Assignment> out;
  out.reserve(fs.size() + gs.size());
  std::size_t pf = 0, pg = 0;
  while (pf < fs.size() && pg < gs.size()) {
    if (fs[pf].var < gs[pg].var) {
      out.push_back(fs[pf++]);
    } else if (fs[pf].var > gs[pg].var) {
      out.push_back(gs[pg++]);
    } else {
      if (fs[pf].value != gs[pg].value)
        throw IncompatibleAssignments(fs[pf].var);
      out.push_back(fs[pf]);
      ++pf;
      ++pg;
    }
  }
  out.insert(out.end(), fs.begin() + pf, fs.end());
  out.insert(out.end(), gs.begin() + pg, gs.end());
  return Feature(std::move(out));
}

PairFeature union_over_pair(const std::vector<PairFeature>& hs, VarPair pair) {
  if (hs.empty())
    throw ValidationError("union over a pair needs at least one feature");
  Feature acc;
  for (const PairFeature& h : hs) {
    if (h.pair() != pair)
      throw ValidationError("union over pair (" + std::to_string(pair.i) +
                            "," + std::to_string(pair.j) +
                            ") given a feature relative to (" +
                            std::to_string(h.pair().i) + "," +
                            std::to_string(h.pair().j) + ")");
    acc = union_features(acc, h.ctx());
  }
  return PairFeature(pair, std::move(acc));
}

Count fc_cardinality(const PairFeature& p, const DomainSpec& domain) {
  Count prod = 1;
  for (std::size_t k = 0; k < domain.n_vars(); ++k) {
    if (k == p.pair().i || k == p.pair().j) continue;
    if (!p.ctx().has(k)) prod *= domain.card(k);
  }
  return prod;
}

bool subset_of(const Feature& inner, const Feature& outer) {
  const auto& is = inner.assignments();
  const auto& os = outer.assignments();
  std::size_t po = 0;
  for (const Assignment& a : is) {
    while (po < os.size() && os[po].var < a.var) ++po;
    if (po == os.size() || os[po].var != a.var || os[po].value != a.value)
      return false;
  }
  return true;
}

bool compatible(const Feature& a, const Feature& b) {
  const auto& as = a.assignments();
  const auto& bs = b.assignments();
  std::size_t pa = 0, pb = 0;
  while (pa < as.size() && pb < bs.size()) {
    if (as[pa].var < bs[pb].var) {
      ++pa;
    } else if (as[pa].var > bs[pb].var) {
      ++pb;
    } else {
      if (as[pa].value != bs[pb].value) return false;
      ++pa;
      ++pb;
    }
  }
  return true;
}

std::optional<PairFeature> intersect_fc(const Feature& f, const Feature& g,
                                        VarPair pair,
                                        const DomainSpec& domain) {
  if (!scope_contains_pair(f, pair) || !scope_contains_pair(g, pair) ||
      !compatible_outside_pair(f, g, pair))
    return std::nullopt;
  return intersect_fc(strip_pair(f, pair), strip_pair(g, pair), domain);
}

std::optional<PairFeature> intersect_fc(const PairFeature& f,
                                        const PairFeature& g,
                                        const DomainSpec&) {
  if (f.pair() != g.pair())
    throw ValidationError("intersection of features relative to different pairs");
  if (!compatible(f.ctx(), g.ctx())) return std::nullopt;
  return PairFeature(f.pair(), union_features(f.ctx(), g.ctx()));
}

namespace {

// The non-trivial difference: one feature per g-only variable X_k (ascending)
// per value != X_k(g), extending f with g's earlier g-only assignments.
// Requires f, g compatible and g not a subset of f.
std::vector<PairFeature> difference_set(const PairFeature& f,
                                        const PairFeature& g,
                                        const DomainSpec& domain) {
  std::vector<std::size_t> g_only;
  for (const Assignment& a : g.ctx().assignments())
    if (!f.ctx().has(a.var)) g_only.push_back(a.var);  // already ascending

  std::vector<PairFeature> out;
  std::vector<Assignment> base = f.ctx().assignments();
  for (std::size_t k : g_only) {
    const std::uint32_t gv = *g.ctx().value_of(k);
    for (std::uint32_t v = 0; v < domain.card(k); ++v) {
      if (v == gv) continue;
      std::vector<Assignment> as = base;
      as.push_back({k, v});
      out.emplace_back(f.pair(), Feature(std::move(as)));
    }
    // Features for later k agree with g on this variable.
    base.push_back({k, gv});
  }
  return out;
}

}  // namespace

DiffResult diff_fc(const Feature& f, const Feature& g, VarPair pair,
                   const DomainSpec& domain) {
  const bool c1f = scope_contains_pair(f, pair);
  const bool c1g = scope_contains_pair(g, pair);
  if (!c1f) return {DiffKind::Empty, {}};
  const PairFeature fp = strip_pair(f, pair);
  if (!c1g) return {DiffKind::WholeOfF, {}};
  const PairFeature gp = strip_pair(g, pair);
  if (subset_of(gp.ctx(), fp.ctx())) return {DiffKind::Empty, {}};
  if (!compatible_outside_pair(f, g, pair)) return {DiffKind::WholeOfF, {}};
  return {DiffKind::DifferenceSet, difference_set(fp, gp, domain)};
}

DiffResult diff_fc(const PairFeature& f, const PairFeature& g,
                   const DomainSpec& domain) {
  // Pair-relative operands stand for features with the pair in scope, so the
  // scope conditions hold implicitly.
  if (f.pair() != g.pair())
    throw ValidationError("difference of features relative to different pairs");
  if (subset_of(g.ctx(), f.ctx())) return {DiffKind::Empty, {}};
  if (!compatible(f.ctx(), g.ctx())) return {DiffKind::WholeOfF, {}};
  return {DiffKind::DifferenceSet, difference_set(f, g, domain)};
}

}  // namespace loglin
