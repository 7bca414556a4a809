#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lcs/adjustment.hpp"
#include "lcs/estimation.hpp"

namespace lcs {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Random topological order; each forward pair gets an edge with
// probability degree / (n - 1).
MixedGraph gen_er_dag(int n, double degree, std::uint64_t seed);
// Weights U[0.5, 1.5], unit noise.
LinearScm gen_linear_scm(const MixedGraph& dag, std::uint64_t seed);
// k nodes drawn uniformly among those with at least two children.
NodeSet choose_latents(const MixedGraph& dag, int k, std::uint64_t seed);
// Observed columns only, in node order.
Dataset sample(const LinearScm& scm, int n, std::uint64_t seed);
Dataset sample_serial(const LinearScm& scm, int n, std::uint64_t seed);

// Independent 64-bit seed for (seed, a, b).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b);

struct ExperimentConfig {
  int n_nodes = 20;
  double avg_degree = 3.0;
  double latent_fraction = 0.1;
  int n_latents = -1;  // overrides latent_fraction when >= 0
  int n_samples = 10000;  // 0 selects the graph oracle
  int n_reps = 100;
  std::uint64_t seed = 1;
  std::vector<std::string> methods{"lcs"};
  double alpha = 0.05;
  EhsConfig ehs;
  LearnerConfig learner;
  std::optional<MixedGraph> network;  // fixed DAG instead of random ones
  bool check_gac = true;
  bool log_queries = false;
  std::uint64_t max_tests = 0;  // CI test budget per method run, 0 for none
  int threads = 0;  // 0 leaves the OpenMP default
};

struct RepResult {
  int rep = 0;
  std::string method;
  std::string x;
  std::string y;
  int n_observed = 0;
  EffectCase effect_case = EffectCase::NonIdentifiable;
  Rule rule = Rule::None;
  NodeSet adjustment_set;
  std::optional<std::string> witness;
  double truth = 0.0;
  std::optional<double> estimate;
  std::optional<double> re;
  std::optional<double> abs_error;
  std::uint64_t n_tests = 0;
  double runtime_ms = 0.0;
  std::optional<bool> gac_valid;
  std::optional<bool> zero_correct;
  bool capped = false;
  std::string stop_rule;
  std::string error;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<RepResult> rows;
  std::vector<nlohmann::json> log;
  nlohmann::json summary() const;
};

void validate(const ExperimentConfig& cfg);
ExperimentResult run_experiment(const ExperimentConfig& cfg);
// results.csv, summary.json, runlog.jsonl
void write_outputs(const ExperimentResult& r, const std::string& dir);
std::string results_csv(const ExperimentResult& r);

}  // namespace lcs
