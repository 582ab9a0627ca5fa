// llcmp: compare the independence structures encoded by discrete log-linear
// models, plus the supporting plumbing (partition dumps, instance generation,
// assertion census, KL-vs-structure-error experiment).
//
// Exit codes (stable): 0 success, 1 usage error, 2 input validation error,
// 3 cap/guard exceeded, 4 internal invariant violation.

#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "loglin/compare.hpp"
#include "loglin/evaluation.hpp"
#include "loglin/feature_algebra.hpp"
#include "loglin/model_io.hpp"
#include "loglin/oracle.hpp"
#include "loglin/partition.hpp"
#include "loglin/types.hpp"

namespace {

using namespace loglin;
using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

StructureModel load_checked(const std::string& path) {
  ParsedModel parsed = load_model_file(path);
  for (const std::string& w : parsed.warnings)
    std::cerr << path << ": warning: " << w << "\n";
  return std::move(parsed.model);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open " + path + " for writing");
  out << text;
  if (!out.flush()) throw ValidationError("failed writing " + path);
}

json matrix_json(const ConfusionMatrix& cm, bool per_pair) {
  json out;
  out["tp"] = cm.tp.str();
  out["fp"] = cm.fp.str();
  out["fn"] = cm.fn.str();
  out["tn"] = cm.tn.str();
  out["total"] = cm.total.str();
  out["distance"] = cm.distance().str();
  out["normalized_distance"] = cm.normalized_distance();
  if (per_pair) {
    json rows = json::array();
    for (const auto& [pair, c] : cm.per_pair) {
      json row;
      row["i"] = pair.i;
      row["j"] = pair.j;
      row["tp"] = c.tp.str();
      row["fp"] = c.fp.str();
      row["fn"] = c.fn.str();
      row["tn"] = c.tn.str();
      rows.push_back(std::move(row));
    }
    out["per_pair"] = std::move(rows);
  }
  return out;
}

std::string matrix_csv(const ConfusionMatrix& cm, bool per_pair,
                       const std::string& verdict) {
  std::string out = "metric,value\n";
  out += "tp," + cm.tp.str() + "\n";
  out += "fp," + cm.fp.str() + "\n";
  out += "fn," + cm.fn.str() + "\n";
  out += "tn," + cm.tn.str() + "\n";
  out += "total," + cm.total.str() + "\n";
  out += "distance," + cm.distance().str() + "\n";
  out += "normalized_distance," + std::to_string(cm.normalized_distance()) + "\n";
  if (!verdict.empty()) out += "verdict," + verdict + "\n";
  if (per_pair) {
    out += "pair_i,pair_j,tp,fp,fn,tn\n";
    for (const auto& [pair, c] : cm.per_pair)
      out += std::to_string(pair.i) + "," + std::to_string(pair.j) + "," +
             c.tp.str() + "," + c.fp.str() + "," + c.fn.str() + "," +
             c.tn.str() + "\n";
  }
  return out;
}

bool same_counts(const ConfusionMatrix& a, const ConfusionMatrix& b) {
  return a.tp == b.tp && a.fp == b.fp && a.fn == b.fn && a.tn == b.tn &&
         a.total == b.total && a.per_pair == b.per_pair;
}

int run_compare(const std::string& path_a, const std::string& path_b,
                bool oracle, bool check, bool per_pair, std::uint64_t cap,
                const std::string& format) {
  const StructureModel A = load_checked(path_a);
  const StructureModel B = load_checked(path_b);
  if (A.domain != B.domain)
    throw ValidationError("the two models declare different variables");

  ComparatorConfig cfg;
  cfg.max_union_terms = cap;
  cfg.emit_per_pair = true;

  ConfusionMatrix cm;
  std::string verdict;
  if (check) {
    const ConfusionMatrix fast = confusion_matrix(A, B, cfg);
    const ConfusionMatrix brute = oracle::brute_confusion_matrix(A, B);
    verdict = same_counts(fast, brute) ? "MATCH" : "MISMATCH";
    cm = fast;
  } else if (oracle) {
    cm = oracle::brute_confusion_matrix(A, B);
  } else {
    cm = confusion_matrix(A, B, cfg);
  }

  if (format == "csv") {
    std::cout << matrix_csv(cm, per_pair, verdict);
  } else {
    json out = matrix_json(cm, per_pair);
    if (!verdict.empty()) out["verdict"] = verdict;
    std::cout << out.dump(2) << "\n";
  }
  return verdict == "MISMATCH" ? 4 : 0;
}

int run_partition(const std::string& path, std::size_t i, std::size_t j) {
  const StructureModel m = load_checked(path);
  if (i >= m.domain.n_vars() || j >= m.domain.n_vars())
    throw ValidationError("pair variable out of range");
  const VarPair pair(i, j);  // throws ValidationError when i == j

  std::vector<PairFeature> input;
  for (const Feature& f : m.features)
    if (scope_contains_pair(f, pair)) input.push_back(strip_pair(f, pair));

  const PartitionModel p = partition(input, pair, m.domain);

  std::cout << "pair: (" << pair.i << ", " << pair.j << ")\n";
  std::cout << "input (" << input.size() << "):\n";
  for (const PairFeature& h : input) std::cout << "  " << to_string(h) << "\n";
  std::cout << "partition (" << p.members.size() << "):\n";
  Count coverage = 0;
  for (const PairFeature& h : p.members) {
    const Count card = fc_cardinality(h, m.domain);
    coverage += card;
    std::cout << "  " << to_string(h) << "  [" << card.str() << "]\n";
  }
  std::cout << "coverage: " << coverage.str() << "\n";
  return 0;
}

int run_gen(std::size_t n_vars, std::uint32_t card, std::size_t n_features,
            std::size_t max_arity, std::uint64_t seed,
            const std::string& out_path) {
  if (max_arity == 0 || max_arity > n_vars)
    throw UsageError("--max-arity must be between 1 and --vars");
  const DomainSpec domain = DomainSpec::uniform(n_vars, card);

  std::mt19937_64 eng(seed);
  auto below = [&](std::size_t n) { return static_cast<std::size_t>(eng() % n); };

  const auto by_canon = [](const Feature& a, const Feature& b) {
    return canonical_less(a, b);
  };
  std::set<Feature, decltype(by_canon)> seen(by_canon);
  std::vector<Feature> features;
  std::size_t stale = 0;
  while (features.size() < n_features) {
    const std::size_t arity = 1 + below(max_arity);
    std::vector<std::size_t> vars(n_vars);
    std::iota(vars.begin(), vars.end(), 0);
    for (std::size_t k = n_vars; k > 1; --k) std::swap(vars[k - 1], vars[below(k)]);
    std::vector<Assignment> as;
    for (std::size_t k = 0; k < arity; ++k)
      as.push_back({vars[k], static_cast<std::uint32_t>(below(card))});
    Feature f(std::move(as));
    if (seen.insert(f).second) {
      features.push_back(std::move(f));
      stale = 0;
    } else if (++stale > 10'000) {
      throw UsageError("cannot generate " + std::to_string(n_features) +
                       " distinct features over this domain");
    }
  }

  const StructureModel m = make_model(domain, std::move(features), {});
  const std::string text = serialize_model(m, 2) + "\n";
  if (out_path.empty())
    std::cout << text;
  else
    write_text(out_path, text);
  return 0;
}

int run_census(std::size_t n_vars, std::uint32_t card) {
  const DomainSpec domain = DomainSpec::uniform(n_vars, card);
  const oracle::Census census = oracle::complete_triplet_census(domain);
  std::cout << "context_vars,free_vars,count\n";
  for (const oracle::CensusRow& row : census.rows)
    std::cout << row.context_vars << "," << row.free_vars << ","
              << row.count.str() << "\n";
  std::cout << "total," << census.total.str() << "\n";
  return 0;
}

int run_kl_experiment(const std::string& ref_path, std::size_t n,
                      std::uint64_t seed, const std::string& mode,
                      const std::string& out_path) {
  const StructureModel reference =
      ref_path.empty() ? eval::make_reference_model(5, {}) : load_checked(ref_path);

  eval::ExperimentOptions opts;
  opts.n_structures = n;
  opts.seed = seed;
  opts.fp_mode = mode == "fp" || mode == "both";
  opts.fn_mode = mode == "fn" || mode == "both";

  const std::vector<eval::ExperimentRecord> records =
      eval::run_kl_experiment(reference, opts);
  const std::string csv = eval::to_csv(records);

  std::ostream& summary_out = out_path.empty() ? std::cerr : std::cout;
  if (out_path.empty())
    std::cout << csv;
  else
    write_text(out_path, csv);

  for (eval::PerturbMode pm : {eval::PerturbMode::FpOnly, eval::PerturbMode::FnOnly}) {
    std::vector<double> pct, kl;
    for (const eval::ExperimentRecord& r : records)
      if (r.mode == pm) {
        pct.push_back(r.error_pct);
        kl.push_back(r.kl_nats);
      }
    if (kl.empty()) continue;
    char line[160];
    std::snprintf(line, sizeof line,
                  "%s: n=%zu spearman(error_pct, kl)=%.4f max_kl=%.6g\n",
                  pm == eval::PerturbMode::FpOnly ? "fp" : "fn", kl.size(),
                  eval::spearman(pct, kl), *std::max_element(kl.begin(), kl.end()));
    summary_out << line;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact structural comparison of log-linear models over "
               "discrete variables"};
  app.require_subcommand(1);

  // compare
  auto* cmp = app.add_subcommand(
      "compare", "Confusion matrix and distance between two models");
  std::string cmp_a, cmp_b, cmp_format = "json";
  bool cmp_oracle = false, cmp_check = false, cmp_per_pair = false;
  std::uint64_t cmp_cap = 1'000'000;
  cmp->add_option("modelA", cmp_a, "First model (JSON)")->required();
  cmp->add_option("modelB", cmp_b, "Second model (JSON)")->required();
  auto* oracle_flag =
      cmp->add_flag("--oracle", cmp_oracle, "Count by brute-force enumeration");
  cmp->add_flag("--check", cmp_check, "Run both paths and print a match verdict")
      ->needs(oracle_flag);
  cmp->add_flag("--per-pair", cmp_per_pair, "Include per-pair counts");
  cmp->add_option("--max-union-terms", cmp_cap,
                  "Cap on the per-feature cross-product expansion")
      ->envname("LLCMP_MAX_UNION_TERMS");
  cmp->add_option("--format", cmp_format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}));

  // partition
  auto* part = app.add_subcommand(
      "partition", "Dump the disjoint partition of one pair's coverage");
  std::string part_model;
  std::vector<std::size_t> part_pair;
  part->add_option("model", part_model, "Model (JSON)")->required();
  part->add_option("--pair", part_pair, "Variable pair i j")
      ->expected(2)
      ->required();

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a random model file");
  std::size_t gen_vars = 0, gen_features = 5, gen_max_arity = 3;
  std::uint32_t gen_card = 2;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--vars", gen_vars, "Number of variables")->required();
  gen->add_option("--card", gen_card, "Cardinality of every variable");
  gen->add_option("--features", gen_features, "Number of features");
  gen->add_option("--max-arity", gen_max_arity, "Largest feature scope");
  gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_option("--out", gen_out, "Output path (stdout when absent)");

  // census
  auto* census = app.add_subcommand(
      "census", "Count all dependence assertions by context shape");
  std::size_t census_vars = 0;
  std::uint32_t census_card = 2;
  census->add_option("--vars", census_vars, "Number of variables")->required();
  census->add_option("--card", census_card, "Cardinality of every variable");

  // kl-experiment
  auto* kle = app.add_subcommand(
      "kl-experiment",
      "Structural-error vs KL-divergence sweep over perturbed models");
  std::string kle_ref, kle_mode = "both", kle_out;
  std::size_t kle_n = 30;
  std::uint64_t kle_seed = 7;
  kle->add_option("reference", kle_ref,
                  "Reference model with weights (built-in when absent)");
  kle->add_option("--n", kle_n, "Structures per mode");
  kle->add_option("--seed", kle_seed, "RNG seed");
  kle->add_option("--mode", kle_mode, "Perturbation mode")
      ->check(CLI::IsMember({"fp", "fn", "both"}));
  kle->add_option("--out", kle_out, "CSV path (stdout when absent)");

  try {
    app.parse(argc, argv);
    if (*cmp)
      return run_compare(cmp_a, cmp_b, cmp_oracle, cmp_check, cmp_per_pair,
                         cmp_cap, cmp_format);
    if (*part) return run_partition(part_model, part_pair[0], part_pair[1]);
    if (*gen)
      return run_gen(gen_vars, gen_card, gen_features, gen_max_arity, gen_seed,
                     gen_out);
    if (*census) return run_census(census_vars, census_card);
    if (*kle) return run_kl_experiment(kle_ref, kle_n, kle_seed, kle_mode, kle_out);
    return 1;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const CapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const GuardExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
}
