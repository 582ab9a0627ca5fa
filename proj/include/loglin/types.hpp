#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace loglin {

// Context counts are products of per-variable cardinalities summed over all
// variable pairs; they overflow 64-bit arithmetic at modest domain sizes.
using Count = boost::multiprecision::cpp_int;

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Two features assign different values to the same variable where agreement
// is required.
struct IncompatibleAssignments : ValidationError {
  std::size_t var;
  explicit IncompatibleAssignments(std::size_t v)
      : ValidationError("incompatible assignments at variable X" +
                        std::to_string(v)),
        var(v) {}
};

// The cross-product expansion in the false-negative construction would exceed
// the configured term cap. Never downgraded to a truncated result: the counts
// are exact or the caller hears about it.
struct CapExceeded : std::runtime_error {
  std::size_t pair_i, pair_j;
  std::string feature;
  explicit CapExceeded(std::size_t i, std::size_t j, std::string feat,
                       const std::string& detail)
      : std::runtime_error("term cap exceeded for pair (" + std::to_string(i) +
                           "," + std::to_string(j) + ") at feature " + feat +
                           ": " + detail),
        pair_i(i), pair_j(j), feature(std::move(feat)) {}
};

// A brute-force or evaluation operation would exceed its size guard.
struct GuardExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Per-variable cardinalities of the discrete domain. Cardinality 1 is
// rejected: a one-valued variable degenerates every difference construction
// (it would emit cardinality-1 == 0 alternatives).
struct DomainSpec {
  std::vector<std::uint32_t> cards;

  DomainSpec() = default;
  explicit DomainSpec(std::vector<std::uint32_t> c);
  static DomainSpec uniform(std::size_t n, std::uint32_t card);

  std::size_t n_vars() const { return cards.size(); }
  std::uint32_t card(std::size_t k) const { return cards[k]; }

  bool operator==(const DomainSpec&) const = default;
};

struct Assignment {
  std::size_t var;
  std::uint32_t value;

  bool operator==(const Assignment&) const = default;
  auto operator<=>(const Assignment&) const = default;
};

// Sparse partial assignment, kept sorted by variable index (canonical form:
// equal assignment sequences <=> equal features).
class Feature {
 public:
  Feature() = default;
  explicit Feature(std::vector<Assignment> as);
  Feature(std::initializer_list<Assignment> as)
      : Feature(std::vector<Assignment>(as)) {}

  const std::vector<Assignment>& assignments() const { return as_; }
  std::size_t arity() const { return as_.size(); }
  bool empty() const { return as_.empty(); }

  bool has(std::size_t var) const;
  std::optional<std::uint32_t> value_of(std::size_t var) const;

  bool operator==(const Feature&) const = default;

 private:
  std::vector<Assignment> as_;  // strictly ascending by var
};

// Unordered pair of distinct variables, normalized to i < j.
struct VarPair {
  std::size_t i, j;

  VarPair(std::size_t a, std::size_t b);

  bool operator==(const VarPair&) const = default;
  auto operator<=>(const VarPair&) const = default;
};

// A feature quotiented by a pair (i,j): the assignments to X_i and X_j are
// dropped. This is the representation the FC semantics actually uses; keeping
// the pair variables unassigned removes the "any value of X_i, X_j" ambiguity
// of union-over-pair results.
class PairFeature {
 public:
  PairFeature(VarPair pair, Feature ctx);

  const VarPair& pair() const { return pair_; }
  const Feature& ctx() const { return ctx_; }

  bool operator==(const PairFeature&) const = default;

 private:
  VarPair pair_;
  Feature ctx_;  // never assigns pair_.i or pair_.j
};

// Complete assignment to all variables except the pair, stored densely in
// ascending variable order.
struct FCContext {
  VarPair pair;
  std::vector<std::uint32_t> values;  // length n-2

  bool operator==(const FCContext&) const = default;
  auto operator<=>(const FCContext&) const = default;
};

// Position of variable `var` inside the dense V \ {i,j} value vector.
std::size_t ctx_pos(const VarPair& pair, std::size_t var);

// Domain + canonical feature set; weights are optional and ignored by every
// structure-only operation.
struct StructureModel {
  DomainSpec domain;
  std::vector<Feature> features;  // unique, in canonical order
  std::vector<double> weights;    // empty, or aligned to features

  bool has_weights() const { return !weights.empty(); }
  bool operator==(const StructureModel&) const = default;
};

// Validates features against the domain, merges duplicates (first weight
// kept), and sorts into canonical order. Dedup/empty-scope notices, if any,
// are appended to *warnings.
StructureModel make_model(DomainSpec domain, std::vector<Feature> features,
                          std::vector<double> weights = {},
                          std::vector<std::string>* warnings = nullptr);

// Throws ValidationError (message references `label`) if the feature indexes
// a variable outside the domain or a value outside its cardinality.
void validate_feature(const Feature& f, const DomainSpec& domain,
                      const std::string& label);

// Canonical order: lexicographic on the dense per-variable expansion where
// "unassigned" sorts before every assigned value. Used for deterministic
// model order, partition seeds, and result listings.
bool canonical_less(const Feature& a, const Feature& b);
bool canonical_less(const PairFeature& a, const PairFeature& b);

// f with any assignments to the pair removed; everything else kept.
PairFeature strip_pair(const Feature& f, const VarPair& pair);

// Condition C1: both pair variables are in the feature's scope.
bool scope_contains_pair(const Feature& f, const VarPair& pair);

// Condition C2: f and g agree on every shared variable outside the pair.
bool compatible_outside_pair(const Feature& f, const Feature& g,
                             const VarPair& pair);

// "<X0=1,X2=0>" rendering; "<>" for the empty feature.
std::string to_string(const Feature& f);
std::string to_string(const PairFeature& p);
std::string to_string(const FCContext& ctx);

}  // namespace loglin
