#include "loglin/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <thread>

#include "loglin/compare.hpp"

namespace loglin::eval {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// mt19937_64 with platform-independent draws (std::uniform_real_distribution
// and friends are implementation-defined).
struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  double unit() { return (eng() >> 11) * 0x1.0p-53; }
  std::uint64_t u64() { return eng(); }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(eng() % n); }
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t k = v.size(); k > 1; --k)
      std::swap(v[k - 1], v[below(k)]);
  }
};

std::uint64_t config_count_guarded(const DomainSpec& domain,
                                   std::uint64_t guard) {
  Count n = 1;
  for (std::uint32_t c : domain.cards) n *= c;
  if (n > guard)
    throw GuardExceeded("domain has " + n.str() +
                        " configurations, over the guard of " +
                        std::to_string(guard));
  return n.convert_to<std::uint64_t>();
}

std::vector<std::uint64_t> strides(const DomainSpec& domain) {
  // Variable 0 most significant.
  std::vector<std::uint64_t> s(domain.n_vars(), 1);
  for (std::size_t k = domain.n_vars(); k-- > 1;)
    s[k - 1] = s[k] * domain.card(k);
  return s;
}

// Invokes fn with the index of every configuration agreeing with f.
void for_each_extension(const Feature& f, const DomainSpec& domain,
                        const std::vector<std::uint64_t>& stride,
                        const std::function<void(std::uint64_t)>& fn) {
  std::uint64_t base = 0;
  std::vector<std::size_t> free_vars;
  for (std::size_t k = 0; k < domain.n_vars(); ++k) {
    if (auto v = f.value_of(k))
      base += *v * stride[k];
    else
      free_vars.push_back(k);
  }
  std::vector<std::uint32_t> vals(free_vars.size(), 0);
  for (;;) {
    std::uint64_t idx = base;
    for (std::size_t k = 0; k < free_vars.size(); ++k)
      idx += vals[k] * stride[free_vars[k]];
    fn(idx);
    std::size_t k = free_vars.size();
    bool done = true;
    while (k > 0) {
      --k;
      if (++vals[k] < domain.card(free_vars[k])) {
        done = false;
        break;
      }
      vals[k] = 0;
    }
    if (done) break;
  }
}

double log_sum_exp(const std::vector<double>& e) {
  const double m = *std::max_element(e.begin(), e.end());
  double s = 0.0;
  for (double x : e) s += std::exp(x - m);
  return m + std::log(s);
}

// Precomputed firing-config index lists for a structure's features.
std::vector<std::vector<std::uint32_t>> firing_lists(
    const StructureModel& m, const std::vector<std::uint64_t>& stride) {
  std::vector<std::vector<std::uint32_t>> fires(m.features.size());
  for (std::size_t i = 0; i < m.features.size(); ++i)
    for_each_extension(m.features[i], m.domain, stride,
                       [&](std::uint64_t idx) {
                         fires[i].push_back(static_cast<std::uint32_t>(idx));
                       });
  return fires;
}

}  // namespace

ExactDistribution exact_distribution(const StructureModel& m,
                                     std::uint64_t guard) {
  // A zero-feature model is fine (uniform); a weightless non-empty one is not.
  if (m.weights.size() != m.features.size())
    throw ValidationError("exact distribution needs one weight per feature");
  const std::uint64_t n_cfg = config_count_guarded(m.domain, guard);
  const auto stride = strides(m.domain);

  std::vector<double> e(n_cfg, 0.0);
  for (std::size_t i = 0; i < m.features.size(); ++i)
    for_each_extension(m.features[i], m.domain, stride,
                       [&](std::uint64_t idx) { e[idx] += m.weights[i]; });

  ExactDistribution out;
  out.domain = m.domain;
  out.log_z = log_sum_exp(e);
  out.p.resize(n_cfg);
  for (std::uint64_t k = 0; k < n_cfg; ++k)
    out.p[k] = std::exp(e[k] - out.log_z);
  return out;
}

double kl_divergence(const ExactDistribution& p, const ExactDistribution& q) {
  if (p.domain != q.domain || p.p.size() != q.p.size())
    throw ValidationError("KL divergence over mismatched domains");
  double kl = 0.0;
  for (std::size_t k = 0; k < p.p.size(); ++k) {
    if (p.p[k] <= 0.0) continue;  // 0 log(0/q) = 0
    if (q.p[k] <= 0.0) return std::numeric_limits<double>::infinity();
    kl += p.p[k] * std::log(p.p[k] / q.p[k]);
  }
  return std::max(kl, 0.0);  // clamp float noise on p == q
}

FitResult fit_exact(const StructureModel& structure,
                    const ExactDistribution& target, const FitOptions& opts) {
  if (structure.domain != target.domain)
    throw ValidationError("fit target distribution over a different domain");
  const std::uint64_t n_cfg = config_count_guarded(structure.domain, opts.guard);
  if (target.p.size() != n_cfg)
    throw ValidationError("target distribution has the wrong size");
  const auto stride = strides(structure.domain);
  const auto fires = firing_lists(structure, stride);
  const std::size_t nf = structure.features.size();

  std::vector<double> e_target(nf, 0.0);
  for (std::size_t i = 0; i < nf; ++i)
    for (std::uint32_t idx : fires[i]) e_target[i] += target.p[idx];

  struct State {
    std::vector<double> q;
    double log_likelihood;  // sum_x target(x) log q(x)
  };
  std::vector<double> theta(nf, 0.0);
  std::vector<double> energy(n_cfg);
  auto evaluate = [&](const std::vector<double>& th) -> State {
    std::fill(energy.begin(), energy.end(), 0.0);
    for (std::size_t i = 0; i < nf; ++i)
      for (std::uint32_t idx : fires[i]) energy[idx] += th[i];
    const double log_z = log_sum_exp(energy);
    State s;
    s.q.resize(n_cfg);
    for (std::uint64_t k = 0; k < n_cfg; ++k)
      s.q[k] = std::exp(energy[k] - log_z);
    s.log_likelihood = -log_z;
    for (std::size_t i = 0; i < nf; ++i)
      s.log_likelihood += th[i] * e_target[i];
    return s;
  };

  auto gradient = [&](const State& s, std::vector<double>& g) -> double {
    double gn = 0.0;
    for (std::size_t i = 0; i < nf; ++i) {
      double e_model = 0.0;
      for (std::uint32_t idx : fires[i]) e_model += s.q[idx];
      g[i] = e_target[i] - e_model;
      gn = std::max(gn, std::abs(g[i]));
    }
    return gn;
  };

  // Conjugate-gradient ascent (Polak-Ribiere+, restart on non-ascent
  // directions) with Armijo backtracking; plain steepest ascent stalls on
  // heavily overlapping indicator features.
  FitResult result;
  State state = evaluate(theta);
  std::vector<double> g(nf), g_prev(nf), dir(nf), cand(nf);
  double gg_prev = 0.0;
  double step = 1.0;
  while (result.iterations < opts.max_iters) {
    const double gn = gradient(state, g);
    if (gn <= opts.tol) break;

    double gg = 0.0, gy = 0.0;
    for (std::size_t i = 0; i < nf; ++i) {
      gg += g[i] * g[i];
      gy += g[i] * (g[i] - g_prev[i]);
    }
    const double beta =
        (result.iterations == 0 || gg_prev <= 0.0) ? 0.0
                                                   : std::max(0.0, gy / gg_prev);
    double gd = 0.0;
    for (std::size_t i = 0; i < nf; ++i) {
      dir[i] = g[i] + beta * dir[i];
      gd += g[i] * dir[i];
    }
    if (gd <= 0.0) {  // not an ascent direction: restart from the gradient
      dir = g;
      gd = gg;
    }

    auto try_direction = [&](double slope) {
      step = std::min(step * 2.0, 1e6);
      while (step >= 1e-14) {
        for (std::size_t i = 0; i < nf; ++i) cand[i] = theta[i] + step * dir[i];
        State next = evaluate(cand);
        if (next.log_likelihood >=
            state.log_likelihood + 1e-4 * step * slope) {
          theta.swap(cand);
          state = std::move(next);
          return true;
        }
        step *= 0.5;
      }
      return false;
    };

    bool accepted = try_direction(gd);
    if (!accepted && dir != g) {  // retry once along the raw gradient
      dir = g;
      step = 1.0;
      accepted = try_direction(gg);
    }
    if (!accepted) break;  // no representable ascent step left
    g_prev = g;
    gg_prev = gg;
    ++result.iterations;
  }

  result.grad_norm = gradient(state, g);
  result.converged = result.grad_norm <= opts.tol;
  result.model = structure;
  result.model.weights = std::move(theta);
  return result;
}

StructureModel make_reference_model(std::size_t n_others,
                                    const WeightsProfile& profile) {
  if (n_others < 2)
    throw ValidationError("reference model needs at least 2 non-root variables");
  const DomainSpec domain = DomainSpec::uniform(n_others + 1, 2);
  Rng rng(profile.seed);

  std::vector<Feature> features;
  std::vector<double> weights;
  auto add = [&](Feature f) {
    features.push_back(std::move(f));
    const double mag = profile.lo + rng.unit() * (profile.hi - profile.lo);
    weights.push_back((rng.u64() & 1) ? mag : -mag);
  };

  // Pairwise interactions, active in the X0=0 regime.
  for (std::size_t a = 1; a <= n_others; ++a)
    for (std::size_t b = a + 1; b <= n_others; ++b)
      for (std::uint32_t va = 0; va < 2; ++va)
        for (std::uint32_t vb = 0; vb < 2; ++vb)
          add(Feature{{0, 0u}, {a, va}, {b, vb}});
  // Ties between the regime variable and everything else.
  for (std::size_t k = 1; k <= n_others; ++k)
    for (std::uint32_t v = 0; v < 2; ++v)
      for (std::uint32_t w = 0; w < 2; ++w)
        add(Feature{{0, v}, {k, w}});

  return make_model(domain, std::move(features), std::move(weights));
}

namespace {

// Adds dependence territory not already covered: some pair within the
// feature's scope where subtracting the model's coverage leaves something.
bool adds_coverage(const Feature& cand, const StructureModel& current) {
  StructureModel single = current;
  single.features = {cand};
  single.weights.clear();
  const auto& scope = cand.assignments();
  for (std::size_t a = 0; a < scope.size(); ++a)
    for (std::size_t b = a + 1; b < scope.size(); ++b) {
      const VarPair pair(scope[a].var, scope[b].var);
      if (!build_hfn(single, current, pair).empty()) return true;
    }
  return false;
}

StructureModel perturb_fp(const StructureModel& reference, std::size_t count,
                          std::uint64_t seed) {
  Rng rng(splitmix64(seed));
  const std::size_t n = reference.domain.n_vars();
  StructureModel current = reference;

  for (std::size_t added = 0; added < count; ++added) {
    bool ok = false;
    for (std::size_t attempt = 0; attempt < 500 && !ok; ++attempt) {
      const std::size_t arity = 2 + rng.below(n - 1);  // 2..n
      std::vector<std::size_t> vars(n);
      std::iota(vars.begin(), vars.end(), 0);
      rng.shuffle(vars);
      std::vector<Assignment> as;
      for (std::size_t k = 0; k < arity; ++k)
        as.push_back({vars[k],
                      static_cast<std::uint32_t>(
                          rng.below(reference.domain.card(vars[k])))});
      Feature cand(std::move(as));
      if (std::find(current.features.begin(), current.features.end(), cand) !=
          current.features.end())
        continue;
      if (!adds_coverage(cand, current)) continue;

      std::vector<Feature> feats = current.features;
      std::vector<double> ws = current.weights;
      feats.push_back(std::move(cand));
      if (!ws.empty()) ws.push_back(0.0);
      current = make_model(current.domain, std::move(feats), std::move(ws));
      ok = true;
    }
    if (!ok)
      throw GuardExceeded(
          "could not generate a coverage-adding feature after bounded retries");
  }
  return current;
}

StructureModel perturb_fn(const StructureModel& reference, std::size_t count,
                          std::uint64_t seed) {
  if (count > reference.features.size())
    throw ValidationError("cannot remove " + std::to_string(count) +
                          " features from a model with " +
                          std::to_string(reference.features.size()));
  Rng rng(splitmix64(seed ^ 0x5DEECE66Dull));

  // Group features into same-scope blocks; removal exhausts one block before
  // starting the next (larger scopes first), so FC coverage — not just the
  // parameter count — shrinks steadily as the removal count grows.
  std::map<std::vector<std::size_t>, std::vector<std::size_t>> by_scope;
  for (std::size_t idx = 0; idx < reference.features.size(); ++idx) {
    std::vector<std::size_t> scope;
    for (const Assignment& a : reference.features[idx].assignments())
      scope.push_back(a.var);
    by_scope[scope].push_back(idx);
  }
  std::map<std::size_t, std::vector<std::vector<std::size_t>>, std::greater<>>
      classes;
  for (auto& [scope, members] : by_scope)
    classes[scope.size()].push_back(members);

  std::vector<std::size_t> order;
  for (auto& [size, blocks] : classes) {
    rng.shuffle(blocks);
    for (auto& block : blocks) {
      rng.shuffle(block);
      order.insert(order.end(), block.begin(), block.end());
    }
  }

  std::vector<bool> removed(reference.features.size(), false);
  for (std::size_t k = 0; k < count; ++k) removed[order[k]] = true;

  std::vector<Feature> feats;
  std::vector<double> ws;
  for (std::size_t idx = 0; idx < reference.features.size(); ++idx) {
    if (removed[idx]) continue;
    feats.push_back(reference.features[idx]);
    if (reference.has_weights()) ws.push_back(reference.weights[idx]);
  }
  return make_model(reference.domain, std::move(feats), std::move(ws));
}

}  // namespace

StructureModel perturb(const StructureModel& reference, PerturbMode mode,
                       std::size_t count, std::uint64_t seed) {
  if (count == 0) return reference;
  return mode == PerturbMode::FpOnly ? perturb_fp(reference, count, seed)
                                     : perturb_fn(reference, count, seed);
}

std::vector<ExperimentRecord> run_kl_experiment(
    const StructureModel& reference, const ExperimentOptions& opts) {
  if (reference.weights.size() != reference.features.size())
    throw ValidationError("the reference model needs one weight per feature");
  const ExactDistribution target =
      exact_distribution(reference, opts.fit.guard);

  // Denominators for the error percentage: the maximum possible number of
  // errors of each kind w.r.t. the reference.
  StructureModel empty;
  empty.domain = reference.domain;
  const ConfusionMatrix vs_empty = confusion_matrix(reference, empty);
  const Count max_fn = vs_empty.fn;              // total reference coverage
  const Count max_fp = vs_empty.total - max_fn;  // uncovered territory

  struct Job {
    std::string id;
    PerturbMode mode;
    StructureModel structure;
  };
  std::vector<Job> jobs;
  char buf[32];
  if (opts.fp_mode) {
    for (std::size_t t = 0; t < opts.n_structures; ++t) {
      const std::size_t count = 1 + (t * 15) / std::max<std::size_t>(1, opts.n_structures);
      std::snprintf(buf, sizeof buf, "fp-%03zu", t + 1);
      jobs.push_back({buf, PerturbMode::FpOnly,
                      perturb(reference, PerturbMode::FpOnly, count,
                              splitmix64(opts.seed * 2 + 1) + t)});
    }
  }
  if (opts.fn_mode) {
    // All fn structures share one removal order (the seed is common), so
    // larger counts remove supersets: both the coverage loss and the
    // best-achievable fit degrade monotonically along the batch.
    const std::uint64_t removal_seed = splitmix64(opts.seed * 2);
    const std::size_t nf = reference.features.size();
    for (std::size_t t = 0; t < opts.n_structures; ++t) {
      const std::size_t count = std::max<std::size_t>(
          1, ((t + 1) * nf) / std::max<std::size_t>(1, opts.n_structures));
      std::snprintf(buf, sizeof buf, "fn-%03zu", t + 1);
      jobs.push_back({buf, PerturbMode::FnOnly,
                      perturb(reference, PerturbMode::FnOnly, count,
                              removal_seed)});
    }
  }

  auto run_job = [&](const Job& job) -> ExperimentRecord {
    const FitResult fit = fit_exact(job.structure, target, opts.fit);
    const ConfusionMatrix cm = confusion_matrix(reference, job.structure);
    ExperimentRecord rec;
    rec.structure_id = job.id;
    rec.mode = job.mode;
    rec.fp = cm.fp;
    rec.fn = cm.fn;
    const Count& err = job.mode == PerturbMode::FpOnly ? cm.fp : cm.fn;
    const Count& den = job.mode == PerturbMode::FpOnly ? max_fp : max_fn;
    rec.error_pct =
        den == 0 ? 0.0
                 : 100.0 * err.convert_to<double>() / den.convert_to<double>();
    rec.kl_nats =
        kl_divergence(target, exact_distribution(fit.model, opts.fit.guard));
    rec.iterations = fit.iterations;
    rec.grad_norm = fit.grad_norm;
    return rec;
  };

  // Independent fits; records keep job order regardless of scheduling.
  std::vector<ExperimentRecord> records(jobs.size());
  if (std::thread::hardware_concurrency() > 1 && jobs.size() > 1) {
    std::vector<std::future<ExperimentRecord>> futs;
    futs.reserve(jobs.size());
    for (const Job& job : jobs)
      futs.push_back(std::async(std::launch::async | std::launch::deferred,
                                run_job, std::cref(job)));
    for (std::size_t k = 0; k < futs.size(); ++k) records[k] = futs[k].get();
  } else {
    for (std::size_t k = 0; k < jobs.size(); ++k) records[k] = run_job(jobs[k]);
  }
  return records;
}

std::string to_csv(const std::vector<ExperimentRecord>& records) {
  std::string out =
      "structure_id,mode,fp,fn,error_pct,kl_nats,iterations,grad_norm\n";
  char buf[160];
  for (const ExperimentRecord& r : records) {
    std::snprintf(buf, sizeof buf, ",%.6f,%.12g,%u,%.6e\n", r.error_pct,
                  r.kl_nats, r.iterations, r.grad_norm);
    out += r.structure_id;
    out += r.mode == PerturbMode::FpOnly ? ",fp," : ",fn,";
    out += r.fp.str() + "," + r.fn.str();
    out += buf;
  }
  return out;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2)
    return std::numeric_limits<double>::quiet_NaN();
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t x, std::size_t y) { return v[x] < v[y]; });
    std::vector<double> r(v.size());
    std::size_t k = 0;
    while (k < idx.size()) {
      std::size_t m = k;
      while (m + 1 < idx.size() && v[idx[m + 1]] == v[idx[k]]) ++m;
      const double avg = (k + m) / 2.0 + 1.0;  // average rank over the tie run
      for (std::size_t t = k; t <= m; ++t) r[idx[t]] = avg;
      k = m + 1;
    }
    return r;
  };
  const std::vector<double> ra = ranks(a), rb = ranks(b);
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    ma += ra[k];
    mb += rb[k];
  }
  ma /= n;
  mb /= n;
  double cov = 0, va = 0, vb = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    cov += (ra[k] - ma) * (rb[k] - mb);
    va += (ra[k] - ma) * (ra[k] - ma);
    vb += (rb[k] - mb) * (rb[k] - mb);
  }
  if (va <= 0 || vb <= 0) return std::numeric_limits<double>::quiet_NaN();
  return cov / std::sqrt(va * vb);
}

}  // namespace loglin::eval
