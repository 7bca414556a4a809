#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lcs/adjustment.hpp"
#include "lcs/estimation.hpp"
#include "lcs/graph_json.hpp"
#include "lcs/projection.hpp"
#include "lcs/simbench.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kDataError = 3;

struct Failure {
  int code;
  std::string what;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

nlohmann::json result_json(const lcs::LcsResult& r, std::optional<double> effect, long runtime_ms) {
  nlohmann::json j;
  j["case"] = lcs::to_string(r.effect_case);
  j["rule"] = lcs::to_string(r.rule);
  j["adjustment_set"] = r.adjustment_set;
  j["effect"] = effect ? nlohmann::json(*effect) : nlohmann::json(nullptr);
  j["n_tests"] = r.n_tests;
  j["runtime_ms"] = runtime_ms;
  return j;
}

void emit_side_outputs(const lcs::LcsResult& r, const lcs::RunLog& log, const std::string& runlog,
                       const std::string& fragment) {
  if (!runlog.empty()) {
    std::ofstream out(runlog);
    log.write_jsonl(out);
  }
  if (!fragment.empty()) lcs::write_graph(r.local.pag_fragment, fragment);
}

void check_names(const lcs::CiEngine& ci, const std::string& x, const std::string& y) {
  if (x == y) throw Failure{kConfigError, "treatment and outcome must differ"};
  for (const auto& v : {x, y}) {
    const auto& vars = ci.variables();
    if (std::find(vars.begin(), vars.end(), v) == vars.end())
      throw Failure{kConfigError, "unknown variable: " + v};
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local covariate selection for causal effect estimation"};
  app.require_subcommand(1);

  std::string data_path, graph_path, x, y, runlog, fragment, latents_arg, out_dir, methods = "lcs",
                                                                             network;
  double alpha = 0.05;

  auto* run = app.add_subcommand("run", "learn a local structure from data and estimate the effect");
  run->add_option("--data", data_path, "CSV with a header of node ids")->required();
  run->add_option("--treatment", x)->required();
  run->add_option("--outcome", y)->required();
  run->add_option("--alpha", alpha, "Fisher-z significance level");
  run->add_option("--runlog", runlog, "write CI queries and rule firings as JSON lines");
  run->add_option("--fragment", fragment, "write the learned PAG fragment as graph JSON");

  auto* oracle = app.add_subcommand("oracle", "run with m-separation in a known graph as the CI test");
  oracle->add_option("--graph", graph_path, "graph JSON (dag or mag)")->required();
  oracle->add_option("--treatment", x)->required();
  oracle->add_option("--outcome", y)->required();
  oracle->add_option("--latents", latents_arg, "comma separated latent nodes of a DAG");
  oracle->add_option("--runlog", runlog);
  oracle->add_option("--fragment", fragment);

  lcs::ExperimentConfig cfg;
  int n_latents = -1;
  bool log_queries = false;
  auto* sim = app.add_subcommand("simulate", "run a synthetic benchmark");
  sim->add_option("--nodes", cfg.n_nodes);
  sim->add_option("--degree", cfg.avg_degree);
  sim->add_option("--latent-frac", cfg.latent_fraction);
  sim->add_option("--latents", n_latents, "latent count, overrides --latent-frac");
  sim->add_option("--samples", cfg.n_samples, "0 uses the graph oracle");
  sim->add_option("--reps", cfg.n_reps);
  sim->add_option("--seed", cfg.seed);
  sim->add_option("--methods", methods, "comma separated: lcs,ehs");
  sim->add_option("--alpha", cfg.alpha);
  sim->add_option("--network", network, "fixed DAG (graph JSON) instead of random graphs");
  sim->add_option("--threads", cfg.threads);
  sim->add_option("--max-tests", cfg.max_tests, "CI test budget per method run, 0 for none");
  sim->add_flag("--log-queries", log_queries, "record every CI query in runlog.jsonl");
  sim->add_option("--out", out_dir)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigError;
  }

  try {
    if (*run) {
      lcs::Dataset data = lcs::read_csv(data_path);
      auto backend = std::make_shared<lcs::FisherZ>(data, alpha);
      lcs::CiEngine ci(backend);
      check_names(ci, x, y);
      lcs::RunLog log;
      ci.set_log(&log);
      auto t0 = std::chrono::steady_clock::now();
      auto r = lcs::lcs(ci, x, y);
      std::optional<double> effect;
      if (r.effect_case == lcs::EffectCase::Identifiable)
        effect = lcs::estimate_effect_ols(data, x, y, r.adjustment_set);
      else if (r.effect_case == lcs::EffectCase::Zero)
        effect = 0.0;
      long ms = static_cast<long>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                      std::chrono::steady_clock::now() - t0)
                                      .count());
      std::cout << result_json(r, effect, ms).dump(2) << "\n";
      emit_side_outputs(r, log, runlog, fragment);
    } else if (*oracle) {
      lcs::MixedGraph g = lcs::read_graph(graph_path);
      auto latents = split_list(latents_arg);
      if (!latents.empty()) {
        if (g.kind() != lcs::GraphKind::Dag) throw Failure{kConfigError, "--latents needs a DAG"};
        g = lcs::latent_project(g, lcs::NodeSet(latents.begin(), latents.end()));
      }
      if (g.kind() == lcs::GraphKind::Pag) throw Failure{kDataError, "oracle needs a DAG or MAG"};
      auto backend = std::make_shared<lcs::GraphOracle>(g);
      lcs::CiEngine ci(backend);
      check_names(ci, x, y);
      lcs::RunLog log;
      ci.set_log(&log);
      auto t0 = std::chrono::steady_clock::now();
      auto r = lcs::lcs(ci, x, y);
      long ms = static_cast<long>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                      std::chrono::steady_clock::now() - t0)
                                      .count());
      std::optional<double> effect;
      if (r.effect_case == lcs::EffectCase::Zero) effect = 0.0;
      std::cout << result_json(r, effect, ms).dump(2) << "\n";
      emit_side_outputs(r, log, runlog, fragment);
    } else if (*sim) {
      cfg.methods = split_list(methods);
      cfg.n_latents = n_latents;
      cfg.log_queries = log_queries;
      if (!network.empty()) {
        cfg.network = lcs::read_graph(network);
        if (cfg.network->kind() != lcs::GraphKind::Dag) throw Failure{kDataError, "--network needs a DAG"};
      }
      auto res = lcs::run_experiment(cfg);
      lcs::write_outputs(res, out_dir);
      std::cout << res.summary().dump(2) << "\n";
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.what << "\n";
    return f.code;
  } catch (const lcs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const lcs::CiError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const lcs::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kDataError;
  } catch (const lcs::GraphError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kDataError;
  }
  return 0;
}
