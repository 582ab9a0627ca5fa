#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "loglin/types.hpp"

namespace loglin::eval {

// Dense joint distribution over all configurations, indexed in mixed-radix
// order with variable 0 most significant.
struct ExactDistribution {
  DomainSpec domain;
  std::vector<double> p;
  double log_z = 0.0;
};

// p(x) proportional to exp(sum of weights of features x agrees with),
// normalized by the explicitly computed partition function. Guarded by the
// total configuration count.
ExactDistribution exact_distribution(const StructureModel& m,
                                     std::uint64_t guard = 1u << 20);

// Relative entropy in nats, with 0*log(0/q) = 0 and p*log(p/0) = +infinity.
double kl_divergence(const ExactDistribution& p, const ExactDistribution& q);

struct FitOptions {
  double tol = 1e-8;             // gradient max-norm stop
  std::uint32_t max_iters = 10'000;
  std::uint64_t guard = 1u << 20;
};

struct FitResult {
  StructureModel model;  // input structure with fitted weights
  std::uint32_t iterations = 0;
  double grad_norm = 0.0;
  bool converged = false;
};

// Maximizes the expected log-likelihood of `target` over the structure's
// weights (exact gradient: target expectation minus model expectation of each
// feature indicator) by ascent with backtracking line search. Non-convergence
// is reported in the result, not thrown.
FitResult fit_exact(const StructureModel& structure,
                    const ExactDistribution& target,
                    const FitOptions& opts = {});

struct WeightsProfile {
  std::uint64_t seed = 1;
  double lo = 1.0, hi = 2.0;  // weight magnitudes; sign drawn per feature
};

// Two-regime benchmark over binary variables X0..Xn: a full set of pairwise
// interaction features <X0=0, Xa=va, Xb=vb> for all pairs 1 <= a < b <= n,
// plus tie features <X0=v, Xk=w> for every k and value combination. Under
// X0=0 every pair within 1..n interacts; under X0=1 none do.
StructureModel make_reference_model(std::size_t n_others,
                                    const WeightsProfile& profile = {});

enum class PerturbMode { FpOnly, FnOnly };

// FpOnly: adds `count` random features, each certified (by the comparator) to
// cover dependence territory the model does not already cover; bounded
// retries, then GuardExceeded. FnOnly: removes `count` features, walking a
// seeded order that exhausts same-scope blocks (larger scopes first) so
// coverage loss accumulates steadily. Weights of surviving features are kept;
// added features get weight 0 placeholders when the reference is weighted.
StructureModel perturb(const StructureModel& reference, PerturbMode mode,
                       std::size_t count, std::uint64_t seed);

struct ExperimentRecord {
  std::string structure_id;
  PerturbMode mode;
  Count fp, fn;          // measured by the comparator against the reference
  double error_pct;      // errors relative to the mode's maximum possible
  double kl_nats;        // KL(reference || fitted candidate)
  std::uint32_t iterations;
  double grad_norm;
};

struct ExperimentOptions {
  std::size_t n_structures = 30;  // per mode
  std::uint64_t seed = 7;
  bool fp_mode = true;
  bool fn_mode = true;
  FitOptions fit;
};

// For each perturbed structure: fit its weights against the reference's exact
// distribution, measure structural errors with the comparator, and record the
// fitted KL. Records are ordered fp-batch then fn-batch, by index.
std::vector<ExperimentRecord> run_kl_experiment(const StructureModel& reference,
                                                const ExperimentOptions& opts = {});

std::string to_csv(const std::vector<ExperimentRecord>& records);

// Spearman rank correlation with average ranks on ties; NaN when either side
// has no variance.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace loglin::eval
