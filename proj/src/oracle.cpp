#include "loglin/oracle.hpp"

#include <algorithm>
#include <map>

#include "loglin/feature_algebra.hpp"

namespace loglin::oracle {

namespace {

Count fc_context_count(VarPair pair, const DomainSpec& domain) {
  Count prod = 1;
  for (std::size_t k = 0; k < domain.n_vars(); ++k)
    if (k != pair.i && k != pair.j) prod *= domain.card(k);
  return prod;
}

void require_pair_in_domain(VarPair pair, const DomainSpec& domain) {
  if (pair.j >= domain.n_vars())
    throw ValidationError("pair variable X" + std::to_string(pair.j) +
                          " outside the domain");
}

}  // namespace

void for_each_fc_context(VarPair pair, const DomainSpec& domain,
                         const std::function<void(const FCContext&)>& fn) {
  require_pair_in_domain(pair, domain);
  std::vector<std::size_t> vars;
  for (std::size_t k = 0; k < domain.n_vars(); ++k)
    if (k != pair.i && k != pair.j) vars.push_back(k);

  FCContext ctx{pair, std::vector<std::uint32_t>(vars.size(), 0)};
  for (;;) {
    fn(ctx);
    // Odometer with the last variable fastest: lexicographic order.
    std::size_t k = vars.size();
    while (k > 0) {
      --k;
      if (++ctx.values[k] < domain.card(vars[k])) break;
      ctx.values[k] = 0;
      if (k == 0) return;
    }
    if (vars.empty()) return;
  }
}

std::vector<FCContext> enumerate_fc_contexts(VarPair pair,
                                             const DomainSpec& domain,
                                             std::uint64_t guard) {
  require_pair_in_domain(pair, domain);
  if (fc_context_count(pair, domain) > guard)
    throw GuardExceeded("FC context enumeration for pair (" +
                        std::to_string(pair.i) + "," + std::to_string(pair.j) +
                        ") exceeds the guard of " + std::to_string(guard));
  std::vector<FCContext> out;
  for_each_fc_context(pair, domain,
                      [&](const FCContext& c) { out.push_back(c); });
  return out;
}

bool is_dependent_fc(const StructureModel& F, VarPair pair,
                     const FCContext& ctx) {
  for (const Feature& f : F.features) {
    if (!scope_contains_pair(f, pair)) continue;
    bool match = true;
    for (const Assignment& a : f.assignments()) {
      if (a.var == pair.i || a.var == pair.j) continue;
      if (ctx.values[ctx_pos(pair, a.var)] != a.value) {
        match = false;
        break;
      }
    }
    if (match) return true;
  }
  return false;
}

bool is_independent_general(const StructureModel& F, const Triplet& t) {
  require_pair_in_domain(t.pair, F.domain);
  validate_feature(t.context, F.domain, "triplet context");
  if (t.context.has(t.pair.i) || t.context.has(t.pair.j))
    throw ValidationError("triplet context must not assign the pair");
  for (std::size_t w : t.free_vars) {
    if (w == t.pair.i || w == t.pair.j || w >= F.domain.n_vars())
      throw ValidationError("free variable X" + std::to_string(w) +
                            " invalid for the triplet");
    if (t.context.has(w))
      throw ValidationError("free variable X" + std::to_string(w) +
                            " also assigned in the context");
  }

  // Expand W over all its value combinations; dependence in any expansion
  // refutes the (strictly less contextualized) independence.
  std::vector<std::uint32_t> wvals(t.free_vars.size(), 0);
  for (;;) {
    std::vector<Assignment> as = t.context.assignments();
    for (std::size_t k = 0; k < t.free_vars.size(); ++k)
      as.push_back({t.free_vars[k], wvals[k]});
    const Feature expanded{std::vector<Assignment>(as)};

    for (const Feature& f : F.features) {
      if (!scope_contains_pair(f, t.pair)) continue;
      if (compatible(f, expanded)) return false;  // f survives in F' and fires
    }

    std::size_t k = t.free_vars.size();
    bool done = true;
    while (k > 0) {
      --k;
      if (++wvals[k] < F.domain.card(t.free_vars[k])) {
        done = false;
        break;
      }
      wvals[k] = 0;
    }
    if (done) break;
  }
  return true;
}

std::vector<FCContext> reduced_dependency_model(const StructureModel& F,
                                                VarPair pair,
                                                std::uint64_t guard) {
  require_pair_in_domain(pair, F.domain);
  if (fc_context_count(pair, F.domain) > guard)
    throw GuardExceeded("reduced dependency model enumeration exceeds the guard");
  std::vector<FCContext> out;
  for_each_fc_context(pair, F.domain, [&](const FCContext& c) {
    if (is_dependent_fc(F, pair, c)) out.push_back(c);
  });
  return out;
}

Census complete_triplet_census(const DomainSpec& domain, const Count& bound) {
  const std::size_t n = domain.n_vars();
  if (n < 2) throw ValidationError("census needs at least 2 variables");

  // Per pair, each remaining variable is either outside U∪W (factor 1), in W
  // (factor 1), or in U with a concrete value (factor card). The per-(|U|,|W|)
  // counts are the coefficients of x^u y^w in prod_k (1 + y + card_k x).
  std::map<std::pair<std::size_t, std::size_t>, Count> acc;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      std::vector<std::vector<Count>> coef(1, std::vector<Count>(1, Count(1)));
      std::size_t m = 0;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        ++m;
        std::vector<std::vector<Count>> next(
            m + 1, std::vector<Count>(m + 1, Count(0)));
        for (std::size_t u = 0; u < coef.size(); ++u)
          for (std::size_t w = 0; w < coef[u].size(); ++w) {
            if (coef[u][w] == 0) continue;
            next[u][w] += coef[u][w];                       // untouched
            next[u][w + 1] += coef[u][w];                   // joins W
            next[u + 1][w] += coef[u][w] * domain.card(k);  // joins U
          }
        coef = std::move(next);
      }
      for (std::size_t u = 0; u < coef.size(); ++u)
        for (std::size_t w = 0; w < coef[u].size(); ++w)
          if (coef[u][w] != 0) acc[{u, w}] += coef[u][w];
    }

  Census census;
  census.total = 0;
  auto emit = [&](std::size_t u, std::size_t w) {
    auto it = acc.find({u, w});
    if (it == acc.end()) return;
    census.rows.push_back({u, w, it->second});
    census.total += it->second;
    acc.erase(it);
  };
  const std::size_t m_max = n - 2;
  for (std::size_t w = 0; w <= m_max; ++w) emit(0, w);      // unassigned-only
  for (std::size_t u = 1; u <= m_max; ++u) emit(u, 0);      // context-only
  for (std::size_t u = 1; u <= m_max; ++u)                  // mixed
    for (std::size_t w = 1; w <= m_max; ++w) emit(u, w);

  if (census.total > bound)
    throw GuardExceeded("census of " + census.total.str() +
                        " assertions exceeds the bound of " + bound.str());
  return census;
}

ConfusionMatrix brute_confusion_matrix(const StructureModel& F,
                                       const StructureModel& G,
                                       std::uint64_t guard) {
  if (F.domain != G.domain)
    throw ValidationError("models are defined over different domains");
  const std::size_t n = F.domain.n_vars();

  Count memberships = 0;
  const std::size_t per_ctx = std::max<std::size_t>(
      1, F.features.size() + G.features.size());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      memberships += fc_context_count(VarPair(i, j), F.domain) * per_ctx;
  if (memberships > guard)
    throw GuardExceeded("brute-force comparison needs " + memberships.str() +
                        " membership tests, over the guard of " +
                        std::to_string(guard));

  ConfusionMatrix cm;
  cm.tp = cm.fp = cm.fn = cm.tn = 0;
  cm.total = fc_total(F.domain);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const VarPair pair(i, j);
      PairCounts c{0, 0, 0, 0};
      for_each_fc_context(pair, F.domain, [&](const FCContext& ctx) {
        const bool in_f = is_dependent_fc(F, pair, ctx);
        const bool in_g = is_dependent_fc(G, pair, ctx);
        if (in_f && in_g)
          ++c.tp;
        else if (in_f && !in_g)
          ++c.fn;
        else if (!in_f && in_g)
          ++c.fp;
        else
          ++c.tn;
      });
      cm.tp += c.tp;
      cm.fp += c.fp;
      cm.fn += c.fn;
      cm.tn += c.tn;
      cm.per_pair.emplace_back(pair, c);
    }
  return cm;
}

}  // namespace loglin::oracle
