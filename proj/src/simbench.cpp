#include "lcs/simbench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

#include <omp.h>

#include "lcs/kernels.hpp"
#include "lcs/projection.hpp"
#include "lcs/rng.hpp"

namespace lcs {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  auto w = Philox4x32::generate({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                                 static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)},
                                Philox4x32::key_of(seed ^ 0x5bd1e995a5a5a5a5ull));
  return std::uint64_t{w[0]} << 32 | w[1];
}

MixedGraph gen_er_dag(int n, double degree, std::uint64_t seed) {
  if (n < 2) throw ConfigError("need at least two nodes");
  if (degree < 0.0 || degree > n - 1) throw ConfigError("average degree must lie in [0, n-1]");
  PhiloxStream rng(seed, 0);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int i = n - 1; i > 0; --i) std::swap(order[i], order[rng.below(static_cast<std::uint64_t>(i) + 1)]);
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("V" + std::to_string(i + 1));
  MixedGraph g(GraphKind::Dag, names);
  double p = degree / (n - 1);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.uniform() < p) g.add_edge(order[i], order[j], Mark::Tail, Mark::Arrow);
  return g;
}

LinearScm gen_linear_scm(const MixedGraph& dag, std::uint64_t seed) {
  LinearScm scm(dag);
  PhiloxStream rng(seed, 1);
  for (int v = 0; v < dag.size(); ++v)
    for (auto& w : scm.weights[v]) w = rng.uniform(0.5, 1.5);
  return scm;
}

NodeSet choose_latents(const MixedGraph& dag, int k, std::uint64_t seed) {
  std::vector<int> eligible;
  for (int v = 0; v < dag.size(); ++v)
    if (dag.children(v).size() >= 2) eligible.push_back(v);
  if (k < 0) throw ConfigError("negative latent count");
  if (static_cast<std::size_t>(k) > eligible.size())
    throw ConfigError("only " + std::to_string(eligible.size()) + " nodes have two or more children");
  PhiloxStream rng(seed, 2);
  for (int i = 0; i < k; ++i)
    std::swap(eligible[i], eligible[i + rng.below(eligible.size() - i)]);
  NodeSet out;
  for (int i = 0; i < k; ++i) out.insert(dag.name(eligible[i]));
  return out;
}

namespace {

Dataset to_dataset(const LinearScm& scm, const Eigen::MatrixXd& full) {
  Dataset d;
  std::vector<Eigen::Index> keep;
  for (int v = 0; v < scm.dag.size(); ++v)
    if (!scm.latents.count(scm.dag.name(v))) {
      keep.push_back(v);
      d.columns.push_back(scm.dag.name(v));
    }
  d.values.resize(full.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) d.values.col(static_cast<Eigen::Index>(j)) = full.col(keep[j]);
  return d;
}

}  // namespace

Dataset sample(const LinearScm& scm, int n, std::uint64_t seed) {
  auto order = scm.topological_order();
  LinearModelView m{&order, &scm.parents, &scm.weights, &scm.noise_sd};
  return to_dataset(scm, sample_rows(m, n, seed));
}

Dataset sample_serial(const LinearScm& scm, int n, std::uint64_t seed) {
  auto order = scm.topological_order();
  LinearModelView m{&order, &scm.parents, &scm.weights, &scm.noise_sd};
  return to_dataset(scm, sample_rows_serial(m, n, seed));
}

void validate(const ExperimentConfig& c) {
  if (!c.network && c.n_nodes < 2) throw ConfigError("--nodes must be at least 2");
  if (c.avg_degree < 0) throw ConfigError("--degree must be non-negative");
  if (c.latent_fraction < 0 || c.latent_fraction >= 1) throw ConfigError("--latent-frac must lie in [0, 1)");
  if (c.n_samples < 0) throw ConfigError("--samples must be non-negative");
  if (c.n_reps < 1) throw ConfigError("--reps must be positive");
  if (!(c.alpha > 0 && c.alpha < 1)) throw ConfigError("--alpha must lie in (0, 1)");
  if (c.methods.empty()) throw ConfigError("no methods given");
  for (const auto& m : c.methods)
    if (m != "lcs" && m != "ehs") throw ConfigError("unknown method: " + m);
}

namespace {

struct RepOutput {
  std::vector<RepResult> rows;
  std::vector<nlohmann::json> log;
};

RepOutput run_rep(const ExperimentConfig& cfg, int rep) {
  RepOutput out;
  auto s = [&](std::uint64_t k) { return derive_seed(cfg.seed, static_cast<std::uint64_t>(rep), k); };
  MixedGraph dag = cfg.network ? *cfg.network : gen_er_dag(cfg.n_nodes, cfg.avg_degree, s(0));
  int n = dag.size();
  int k = cfg.n_latents >= 0 ? cfg.n_latents : static_cast<int>(std::lround(cfg.latent_fraction * n));
  int eligible = 0;
  for (int v = 0; v < n; ++v) eligible += dag.children(v).size() >= 2;
  k = std::min(k, eligible);
  LinearScm scm = gen_linear_scm(dag, s(1));
  scm.latents = choose_latents(dag, k, s(2));

  PhiloxStream prng(s(3), 3);
  int x = -1, y = -1;
  for (int t = 0; t < 100; ++t) {
    int a = static_cast<int>(prng.below(n)), b = static_cast<int>(prng.below(n));
    if (a == b || scm.latents.count(dag.name(a)) || scm.latents.count(dag.name(b))) continue;
    x = a;
    y = b;
    break;
  }
  nlohmann::json head{{"event", "rep"}, {"rep", rep}, {"latents", scm.latents}, {"edges", dag.edge_count()}};
  if (x < 0) {
    head["skipped"] = "no observed treatment/outcome pair after 100 draws";
    out.log.push_back(head);
    return out;
  }
  std::string xs = dag.name(x), ys = dag.name(y);
  head["x"] = xs;
  head["y"] = ys;
  out.log.push_back(head);
  double truth = true_effect(scm, xs, ys);

  std::shared_ptr<const CiBackend> backend;
  std::optional<Dataset> data;
  MixedGraph mag = latent_project(dag, scm.latents);
  if (cfg.n_samples == 0) {
    backend = std::make_shared<GraphOracle>(mag);
  } else {
    data = sample(scm, cfg.n_samples, s(4));
    backend = std::make_shared<FisherZ>(*data, cfg.alpha);
  }
  std::optional<MixedGraph> pag;

  for (const auto& method : cfg.methods) {
    RunLog log(cfg.log_queries);
    CiEngine ci(backend);
    ci.set_log(&log);
    ci.set_budget(cfg.max_tests);
    RepResult r;
    r.rep = rep;
    r.method = method;
    r.x = xs;
    r.y = ys;
    r.n_observed = static_cast<int>(backend->variables().size());
    r.truth = truth;
    auto t0 = std::chrono::steady_clock::now();
    try {
      if (method == "lcs") {
        auto res = lcs(ci, xs, ys, cfg.learner);
        r.effect_case = res.effect_case;
        r.rule = res.rule;
        r.adjustment_set = res.adjustment_set;
        r.witness = res.witness;
        r.n_tests = res.n_tests;
        r.stop_rule = res.local.stop_rule;
      } else {
        auto res = ehs(ci, xs, ys, cfg.ehs);
        r.effect_case = res.effect_case;
        r.adjustment_set = res.adjustment_set;
        r.witness = res.witness;
        r.n_tests = res.n_tests;
        r.capped = res.capped;
      }
    } catch (const BudgetExceeded&) {
      // No verdict: the run stopped part way through.
      r.capped = true;
      r.n_tests = ci.test_count();
      r.stop_rule = "budget";
    } catch (const std::exception& e) {
      r.error = e.what();
    }
    r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (r.error.empty() && r.stop_rule != "budget") {
      if (r.effect_case == EffectCase::Identifiable) {
        if (data) {
          try {
            r.estimate = estimate_effect_ols(*data, xs, ys, r.adjustment_set);
          } catch (const DataError& e) {
            r.error = e.what();
          }
        }
        if (cfg.check_gac) {
          if (!pag) pag = mag_to_pag(mag);
          r.gac_valid = gac_satisfied(*pag, xs, ys, r.adjustment_set);
        }
      } else if (r.effect_case == EffectCase::Zero) {
        r.estimate = 0.0;
        r.zero_correct = truth == 0.0;
      }
      if (r.estimate) {
        if (truth != 0.0)
          r.re = relative_error(*r.estimate, truth);
        else
          r.abs_error = std::abs(*r.estimate);
      }
    }
    for (auto& e : log.entries()) {
      e["rep"] = rep;
      e["method"] = method;
      out.log.push_back(std::move(e));
    }
    out.log.push_back({{"event", "rep_done"},
                       {"rep", rep},
                       {"method", method},
                       {"case", to_string(r.effect_case)},
                       {"n_tests", r.n_tests},
                       {"runtime_ms", r.runtime_ms}});
    out.rows.push_back(std::move(r));
  }
  return out;
}

double median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return std::nan("");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

nlohmann::json num(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  ExperimentResult res;
  res.config = cfg;
  std::vector<RepOutput> outs(cfg.n_reps);
  std::vector<std::string> errors(cfg.n_reps);
  if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
#pragma omp parallel for schedule(dynamic, 1)
  for (int rep = 0; rep < cfg.n_reps; ++rep) {
    try {
      outs[rep] = run_rep(cfg, rep);
    } catch (const std::exception& e) {
      errors[rep] = e.what();
    }
  }
  for (int rep = 0; rep < cfg.n_reps; ++rep) {
    if (!errors[rep].empty()) throw ConfigError("rep " + std::to_string(rep) + ": " + errors[rep]);
    for (auto& r : outs[rep].rows) res.rows.push_back(std::move(r));
    for (auto& e : outs[rep].log) res.log.push_back(std::move(e));
  }
  return res;
}

nlohmann::json ExperimentResult::summary() const {
  nlohmann::json s;
  s["config"] = {{"nodes", config.network ? config.network->size() : config.n_nodes},
                 {"degree", config.avg_degree},
                 {"latent_frac", config.latent_fraction},
                 {"samples", config.n_samples},
                 {"reps", config.n_reps},
                 {"seed", config.seed},
                 {"alpha", config.alpha},
                 {"methods", config.methods},
                 {"mode", config.n_samples == 0 ? "oracle" : "data"}};
  for (const auto& m : config.methods) {
    std::vector<double> re, tests, ms;
    int ident = 0, zero = 0, nonid = 0, violations = 0, wrong_zero = 0, capped = 0, errors = 0;
    for (const auto& r : rows) {
      if (r.method != m) continue;
      if (!r.error.empty()) ++errors;
      capped += r.capped;
      tests.push_back(static_cast<double>(r.n_tests));
      ms.push_back(r.runtime_ms);
      if (r.stop_rule == "budget") continue;
      ident += r.effect_case == EffectCase::Identifiable;
      zero += r.effect_case == EffectCase::Zero;
      nonid += r.effect_case == EffectCase::NonIdentifiable;
      if (r.gac_valid && !*r.gac_valid) ++violations;
      if (r.zero_correct && !*r.zero_correct) ++wrong_zero;
      if (r.re && r.effect_case == EffectCase::Identifiable) re.push_back(*r.re);
    }
    s["methods"][m] = {{"identifiable", ident},
                       {"zero", zero},
                       {"non_identifiable", nonid},
                       {"median_re", num(median(re))},
                       {"mean_re", num(mean(re))},
                       {"re_count", re.size()},
                       {"mean_n_tests", num(mean(tests))},
                       {"median_n_tests", num(median(tests))},
                       {"gac_violations", violations},
                       {"wrong_zero", wrong_zero},
                       {"capped", capped},
                       {"errors", errors},
                       {"mean_runtime_ms", num(mean(ms))}};
  }
  return s;
}

std::string results_csv(const ExperimentResult& r) {
  std::ostringstream out;
  out << std::setprecision(10);
  out << "rep,method,x,y,n_observed,case,rule,adjustment_set,witness,truth,estimate,re,abs_error,n_tests,"
         "gac_valid,zero_correct,capped,stop_rule,error\n";
  auto opt = [&](const std::optional<double>& v) {
    if (v) out << *v;
  };
  auto optb = [&](const std::optional<bool>& v) {
    if (v) out << (*v ? "true" : "false");
  };
  for (const auto& row : r.rows) {
    std::string z;
    for (const auto& v : row.adjustment_set) z += (z.empty() ? "" : ";") + v;
    bool verdict = row.stop_rule != "budget";
    out << row.rep << ',' << row.method << ',' << row.x << ',' << row.y << ',' << row.n_observed << ','
        << (verdict ? to_string(row.effect_case) : "") << ',' << (verdict ? to_string(row.rule) : "") << ',' << z << ','
        << row.witness.value_or("") << ',' << row.truth << ',';
    opt(row.estimate);
    out << ',';
    opt(row.re);
    out << ',';
    opt(row.abs_error);
    out << ',' << row.n_tests << ',';
    optb(row.gac_valid);
    out << ',';
    optb(row.zero_correct);
    out << ',' << (row.capped ? "true" : "false") << ',' << row.stop_rule << ',';
    std::string err = row.error;
    std::replace(err.begin(), err.end(), ',', ';');
    out << err << '\n';
  }
  return out.str();
}

void write_outputs(const ExperimentResult& r, const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream(dir + "/results.csv") << results_csv(r);
  std::ofstream(dir + "/summary.json") << r.summary().dump(2) << "\n";
  std::ofstream log(dir + "/runlog.jsonl");
  for (const auto& e : r.log) log << e.dump() << "\n";
}

}  // namespace lcs
