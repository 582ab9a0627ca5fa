// Shared test utilities: deterministic random instances and enumeration-based
// FC set construction (the slow-but-obvious route the fast code is checked
// against).
#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "loglin/oracle.hpp"
#include "loglin/types.hpp"

namespace testutil {

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(eng() % n); }
};

inline loglin::DomainSpec random_domain(Rng& rng, std::size_t min_vars = 3,
                                        std::size_t max_vars = 6,
                                        std::uint32_t max_card = 3) {
  const std::size_t n = min_vars + rng.below(max_vars - min_vars + 1);
  std::vector<std::uint32_t> cards(n);
  for (auto& c : cards)
    c = 2 + static_cast<std::uint32_t>(rng.below(max_card - 1));
  return loglin::DomainSpec(std::move(cards));
}

// Arbitrary feature; the scope may contain neither, one, or both variables of
// any pair, so every guard branch gets exercised.
inline loglin::Feature random_feature(Rng& rng, const loglin::DomainSpec& d,
                                      std::size_t max_arity) {
  const std::size_t cap = std::min(max_arity, d.n_vars());
  const std::size_t arity = 1 + rng.below(cap);
  std::vector<std::size_t> vars(d.n_vars());
  for (std::size_t k = 0; k < vars.size(); ++k) vars[k] = k;
  for (std::size_t k = vars.size(); k > 1; --k)
    std::swap(vars[k - 1], vars[rng.below(k)]);
  std::vector<loglin::Assignment> as;
  for (std::size_t k = 0; k < arity; ++k)
    as.push_back({vars[k], static_cast<std::uint32_t>(rng.below(d.card(vars[k])))});
  return loglin::Feature(std::move(as));
}

inline loglin::StructureModel random_model(Rng& rng, const loglin::DomainSpec& d,
                                           std::size_t max_features,
                                           std::size_t max_arity) {
  std::vector<loglin::Feature> fs;
  const std::size_t n = rng.below(max_features + 1);
  for (std::size_t k = 0; k < n; ++k)
    fs.push_back(random_feature(rng, d, max_arity));
  return loglin::make_model(d, std::move(fs), {});
}

// FC set of a pair-relative feature, by filtering the full enumeration.
inline std::set<loglin::FCContext> fc_set(const loglin::PairFeature& p,
                                          const loglin::DomainSpec& d) {
  std::set<loglin::FCContext> out;
  for (const loglin::FCContext& c :
       loglin::oracle::enumerate_fc_contexts(p.pair(), d)) {
    bool ok = true;
    for (const loglin::Assignment& a : p.ctx().assignments())
      if (c.values[loglin::ctx_pos(p.pair(), a.var)] != a.value) ok = false;
    if (ok) out.insert(c);
  }
  return out;
}

// FC set of a plain feature for a pair, via the enumeration oracle.
inline std::set<loglin::FCContext> fc_set(const loglin::Feature& f,
                                          loglin::VarPair pair,
                                          const loglin::DomainSpec& d) {
  loglin::StructureModel m = loglin::make_model(d, {f}, {});
  auto v = loglin::oracle::reduced_dependency_model(m, pair);
  return {v.begin(), v.end()};
}

inline std::set<loglin::FCContext> fc_set_union(
    const std::vector<loglin::PairFeature>& ps, const loglin::DomainSpec& d) {
  std::set<loglin::FCContext> out;
  for (const auto& p : ps) {
    auto s = fc_set(p, d);
    out.insert(s.begin(), s.end());
  }
  return out;
}

}  // namespace testutil
