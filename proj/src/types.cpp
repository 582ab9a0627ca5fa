#include "loglin/types.hpp"

#include <algorithm>
#include <sstream>

namespace loglin {

DomainSpec::DomainSpec(std::vector<std::uint32_t> c) : cards(std::move(c)) {
  if (cards.empty())
    throw ValidationError("domain must have at least one variable");
  for (std::size_t k = 0; k < cards.size(); ++k)
    if (cards[k] < 2)
      throw ValidationError("variable X" + std::to_string(k) +
                            ": cardinality must be at least 2");
}

DomainSpec DomainSpec::uniform(std::size_t n, std::uint32_t card) {
  return DomainSpec(std::vector<std::uint32_t>(n, card));
}

Feature::Feature(std::vector<Assignment> as) : as_(std::move(as)) {
  std::sort(as_.begin(), as_.end(),
            [](const Assignment& a, const Assignment& b) { return a.var < b.var; });
  for (std::size_t k = 1; k < as_.size(); ++k)
    if (as_[k].var == as_[k - 1].var)
      throw ValidationError("duplicate assignment to variable X" +
                            std::to_string(as_[k].var));
}

bool Feature::has(std::size_t var) const {
  auto it = std::lower_bound(
      as_.begin(), as_.end(), var,
      [](const Assignment& a, std::size_t v) { return a.var < v; });
  return it != as_.end() && it->var == var;
}

std::optional<std::uint32_t> Feature::value_of(std::size_t var) const {
  auto it = std::lower_bound(
      as_.begin(), as_.end(), var,
      [](const Assignment& a, std::size_t v) { return a.var < v; });
  if (it != as_.end() && it->var == var) return it->value;
  return std::nullopt;
}

VarPair::VarPair(std::size_t a, std::size_t b) : i(std::min(a, b)), j(std::max(a, b)) {
  if (a == b)
    throw ValidationError("pair variables must differ (got X" +
                          std::to_string(a) + " twice)");
}

PairFeature::PairFeature(VarPair pair, Feature ctx)
    : pair_(pair), ctx_(std::move(ctx)) {
  if (ctx_.has(pair_.i) || ctx_.has(pair_.j))
    throw ValidationError("pair-relative feature must not assign X" +
                          std::to_string(pair_.i) + " or X" +
                          std::to_string(pair_.j));
}

std::size_t ctx_pos(const VarPair& pair, std::size_t var) {
  std::size_t pos = var;
  if (var > pair.i) --pos;
  if (var > pair.j) --pos;
  return pos;
}

void validate_feature(const Feature& f, const DomainSpec& domain,
                      const std::string& label) {
  for (const Assignment& a : f.assignments()) {
    if (a.var >= domain.n_vars())
      throw ValidationError(label + ": variable index " + std::to_string(a.var) +
                            " out of range (domain has " +
                            std::to_string(domain.n_vars()) + " variables)");
    if (a.value >= domain.card(a.var))
      throw ValidationError(label + ": value " + std::to_string(a.value) +
                            " out of range for variable X" +
                            std::to_string(a.var) + " (cardinality " +
                            std::to_string(domain.card(a.var)) + ")");
  }
}

bool canonical_less(const Feature& a, const Feature& b) {
  // Lexicographic on the dense expansion with unassigned < assigned: walk the
  // sorted assignment lists; whichever feature skips a variable the other
  // assigns is smaller at that position.
  const auto& as = a.assignments();
  const auto& bs = b.assignments();
  std::size_t pa = 0, pb = 0;
  while (pa < as.size() && pb < bs.size()) {
    if (as[pa].var > bs[pb].var) return true;   // a unassigned at bs[pb].var
    if (as[pa].var < bs[pb].var) return false;  // b unassigned at as[pa].var
    if (as[pa].value != bs[pb].value) return as[pa].value < bs[pb].value;
    ++pa;
    ++pb;
  }
  return pa == as.size() && pb < bs.size();
}

bool canonical_less(const PairFeature& a, const PairFeature& b) {
  if (a.pair() != b.pair()) return a.pair() < b.pair();
  return canonical_less(a.ctx(), b.ctx());
}

StructureModel make_model(DomainSpec domain, std::vector<Feature> features,
                          std::vector<double> weights,
                          std::vector<std::string>* warnings) {
  const bool weighted = !weights.empty();
  if (weighted && weights.size() != features.size())
    throw ValidationError("weights length " + std::to_string(weights.size()) +
                          " does not match feature count " +
                          std::to_string(features.size()));

  std::vector<Feature> kept;
  std::vector<double> kept_w;
  for (std::size_t k = 0; k < features.size(); ++k) {
    validate_feature(features[k], domain, "feature " + std::to_string(k));
    if (std::find(kept.begin(), kept.end(), features[k]) != kept.end()) {
      if (warnings)
        warnings->push_back("duplicate feature at index " + std::to_string(k) +
                            " merged (first weight kept): " +
                            to_string(features[k]));
      continue;
    }
    if (features[k].empty() && warnings)
      warnings->push_back("feature " + std::to_string(k) +
                          " has empty scope; it never induces a dependence");
    kept.push_back(std::move(features[k]));
    if (weighted) kept_w.push_back(weights[k]);
  }

  std::vector<std::size_t> order(kept.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return canonical_less(kept[x], kept[y]);
  });

  StructureModel m;
  m.domain = std::move(domain);
  m.features.reserve(kept.size());
  if (weighted) m.weights.reserve(kept.size());
  for (std::size_t idx : order) {
    m.features.push_back(std::move(kept[idx]));
    if (weighted) m.weights.push_back(kept_w[idx]);
  }
  return m;
}

PairFeature strip_pair(const Feature& f, const VarPair& pair) {
  std::vector<Assignment> out;
  out.reserve(f.arity());
  for (const Assignment& a : f.assignments())
    if (a.var != pair.i && a.var != pair.j) out.push_back(a);
  return PairFeature(pair, Feature(std::move(out)));
}

bool scope_contains_pair(const Feature& f, const VarPair& pair) {
  return f.has(pair.i) && f.has(pair.j);
}

bool compatible_outside_pair(const Feature& f, const Feature& g,
                             const VarPair& pair) {
  // Merge-walk of two sorted assignment lists.
  const auto& fs = f.assignments();
  const auto& gs = g.assignments();
  std::size_t pf = 0, pg = 0;
  while (pf < fs.size() && pg < gs.size()) {
    if (fs[pf].var < gs[pg].var) {
      ++pf;
    } else if (fs[pf].var > gs[pg].var) {
      ++pg;
    } else {
      if (fs[pf].var != pair.i && fs[pf].var != pair.j &&
          fs[pf].value != gs[pg].value)
        return false;
      ++pf;
      ++pg;
    }
  }
  return true;
}

std::string to_string(const Feature& f) {
  std::ostringstream os;
  os << '<';
  bool first = true;
  for (const Assignment& a : f.assignments()) {
    if (!first) os << ',';
    first = false;
    os << 'X' << a.var << '=' << a.value;
  }
  os << '>';
  return os.str();
}

std::string to_string(const PairFeature& p) { return to_string(p.ctx()); }

std::string to_string(const FCContext& ctx) {
  std::ostringstream os;
  os << '<';
  std::size_t var = 0;
  bool first = true;
  for (std::uint32_t v : ctx.values) {
    while (var == ctx.pair.i || var == ctx.pair.j) ++var;
    if (!first) os << ',';
    first = false;
    os << 'X' << var << '=' << v;
    ++var;
  }
  os << '>';
  return os.str();
}

}  // namespace loglin
