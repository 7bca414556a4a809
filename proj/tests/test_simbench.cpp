#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "lcs/kernels.hpp"
#include "lcs/rng.hpp"
#include "lcs/simbench.hpp"

using lcs::ConfigError;
using lcs::ExperimentConfig;

namespace {

std::string hex(const lcs::Philox4x32::Counter& c) {
  std::ostringstream out;
  out << std::hex;
  for (std::size_t i = 0; i < c.size(); ++i) {
    out.width(8);
    out.fill('0');
    out << c[i] << (i + 1 < c.size() ? " " : "");
  }
  return out.str();
}

Eigen::MatrixXd naive_corr(const Eigen::MatrixXd& d) {
  Eigen::Index p = d.cols();
  Eigen::MatrixXd c(p, p);
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < p; ++j) {
      Eigen::VectorXd a = d.col(i).array() - d.col(i).mean();
      Eigen::VectorXd b = d.col(j).array() - d.col(j).mean();
      c(i, j) = a.dot(b) / std::sqrt(a.squaredNorm() * b.squaredNorm());
    }
  return c;
}

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.n_nodes = 8;
  cfg.avg_degree = 2.0;
  cfg.n_latents = 1;
  cfg.n_samples = 2000;
  cfg.n_reps = 6;
  cfg.seed = 5;
  return cfg;
}

}  // namespace

TEST_CASE("philox known answers") {
  CHECK(hex(lcs::Philox4x32::generate({0, 0, 0, 0}, {0, 0})) == "6627e8d5 e169c58d bc57ac4c 9b00dbd8");
  CHECK(hex(lcs::Philox4x32::generate({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                      {0xffffffffu, 0xffffffffu})) == "408f276d 41c83b0e a20bc7c6 6d5451fd");
  CHECK(hex(lcs::Philox4x32::generate({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                      {0xa4093822u, 0x299f31d0u})) == "d16cfe09 94fdcceb 5001e420 24126ea1");
}

TEST_CASE("philox streams") {
  lcs::PhiloxStream a(9, 1), b(9, 1), c(9, 2);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    auto x = a(), y = b(), z = c();
    CHECK(x == y);
    differs = differs || x != z;
  }
  CHECK(differs);

  lcs::PhiloxStream s(3, 0);
  double sum = 0, sq = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    double u = s.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / n - 0.5) < 0.005);
  sum = 0;
  for (int i = 0; i < n; ++i) {
    double z = s.normal();
    sum += z;
    sq += z * z;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(std::abs(sq / n - 1.0) < 0.02);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 70000; ++i) ++hits[s.below(7)];
  for (int h : hits) CHECK(std::abs(h - 10000) < 500);
  CHECK(s.below(1) == 0);
}

TEST_CASE("derived seeds are distinct") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t a = 0; a < 50; ++a)
    for (std::uint64_t b = 0; b < 10; ++b) seen.insert(lcs::derive_seed(1, a, b));
  CHECK(seen.size() == 500);
  CHECK(lcs::derive_seed(1, 2, 3) == lcs::derive_seed(1, 2, 3));
  CHECK(lcs::derive_seed(1, 2, 3) != lcs::derive_seed(2, 2, 3));
}

TEST_CASE("random DAG generator") {
  auto g = lcs::gen_er_dag(20, 3.0, 42);
  CHECK(g.kind() == lcs::GraphKind::Dag);
  CHECK(g.size() == 20);
  CHECK(g.name(0) == "V1");
  CHECK(lcs::validate(g).ok());
  CHECK(g.same_as(lcs::gen_er_dag(20, 3.0, 42)));

  // Expected edge count is n * d / 2.
  double edges = 0;
  const int reps = 400;
  for (int s = 0; s < reps; ++s) edges += lcs::gen_er_dag(20, 3.0, 1000 + s).edge_count();
  CHECK(std::abs(edges / reps - 30.0) < 1.0);
  CHECK(lcs::gen_er_dag(10, 0.0, 1).edge_count() == 0);
  CHECK(lcs::gen_er_dag(6, 5.0, 1).edge_count() == 15);

  CHECK_THROWS_AS(lcs::gen_er_dag(1, 0.0, 1), ConfigError);
  CHECK_THROWS_AS(lcs::gen_er_dag(5, 4.5, 1), ConfigError);
  CHECK_THROWS_AS(lcs::gen_er_dag(5, -1.0, 1), ConfigError);
}

TEST_CASE("random SCM weights") {
  auto g = lcs::gen_er_dag(15, 4.0, 7);
  auto scm = lcs::gen_linear_scm(g, 8);
  auto again = lcs::gen_linear_scm(g, 8);
  int count = 0;
  for (int v = 0; v < g.size(); ++v) {
    CHECK(scm.noise_sd[v] == 1.0);
    for (std::size_t k = 0; k < scm.weights[v].size(); ++k) {
      ++count;
      CHECK(scm.weights[v][k] >= 0.5);
      CHECK(scm.weights[v][k] <= 1.5);
      CHECK(scm.weights[v][k] == again.weights[v][k]);
    }
  }
  CHECK(count == g.edge_count());
}

TEST_CASE("latent choice") {
  auto g = lcs::gen_er_dag(20, 3.0, 11);
  int eligible = 0;
  for (int v = 0; v < g.size(); ++v) eligible += g.children(v).size() >= 2;
  REQUIRE(eligible >= 2);
  auto l = lcs::choose_latents(g, 2, 3);
  CHECK(l.size() == 2);
  for (const auto& v : l) CHECK(g.children(g.index(v)).size() >= 2);
  CHECK(l == lcs::choose_latents(g, 2, 3));
  CHECK(lcs::choose_latents(g, 0, 3).empty());
  CHECK_THROWS_AS(lcs::choose_latents(g, eligible + 1, 3), ConfigError);
  CHECK_THROWS_AS(lcs::choose_latents(g, -1, 3), ConfigError);
}

TEST_CASE("parallel sampling matches the serial reference") {
  auto g = lcs::gen_er_dag(12, 3.0, 21);
  auto scm = lcs::gen_linear_scm(g, 22);
  scm.latents = lcs::choose_latents(g, 1, 23);
  auto par = lcs::sample(scm, 3001, 24);
  auto ser = lcs::sample_serial(scm, 3001, 24);
  CHECK(par.columns == ser.columns);
  CHECK(par.cols() == 11);
  CHECK(par.values == ser.values);
  for (const auto& c : par.columns) CHECK_FALSE(scm.latents.count(c));
  CHECK_FALSE(par.values == lcs::sample(scm, 3001, 25).values);
}

TEST_CASE("sampled moments") {
  lcs::MixedGraph one(lcs::GraphKind::Dag, {"A"});
  auto d = lcs::sample(lcs::LinearScm(one), 100000, 1);
  double m = d.values.col(0).mean();
  double sd = std::sqrt((d.values.col(0).array() - m).square().sum() / (d.rows() - 1));
  CHECK(std::abs(m) < 3.0 / std::sqrt(1e5));
  CHECK(std::abs(sd - 1.0) < 3.0 * std::sqrt(0.5 / 1e5));

  lcs::MixedGraph xy(lcs::GraphKind::Dag, {"X", "Y"});
  xy.add_directed("X", "Y");
  auto e = lcs::sample(lcs::LinearScm(xy), 100000, 2);
  auto c = lcs::correlation_matrix(e.values);
  CHECK(std::abs(c(0, 1) - 1.0 / std::sqrt(2.0)) < 0.01);
}

TEST_CASE("parallel correlation matches the serial reference and a naive oracle") {
  auto g = lcs::gen_er_dag(15, 3.0, 31);
  auto data = lcs::sample(lcs::gen_linear_scm(g, 32), 5000, 33);
  auto par = lcs::correlation_matrix(data.values);
  auto ser = lcs::correlation_matrix_serial(data.values);
  CHECK(par == ser);
  CHECK((par - naive_corr(data.values)).cwiseAbs().maxCoeff() < 1e-12);
  for (Eigen::Index i = 0; i < par.rows(); ++i) CHECK(par(i, i) == 1.0);
}

TEST_CASE("experiment configuration is validated") {
  auto bad = [](auto edit) {
    ExperimentConfig cfg;
    edit(cfg);
    return cfg;
  };
  CHECK_THROWS_AS(lcs::validate(bad([](auto& c) { c.n_nodes = 1; })), ConfigError);
  CHECK_THROWS_AS(lcs::validate(bad([](auto& c) { c.avg_degree = -1; })), ConfigError);
  CHECK_THROWS_AS(lcs::validate(bad([](auto& c) { c.latent_fraction = 1.0; })), ConfigError);
  CHECK_THROWS_AS(lcs::validate(bad([](auto& c) { c.n_samples = -5; })), ConfigError);
  CHECK_THROWS_AS(lcs::validate(bad([](auto& c) { c.n_reps = 0; })), ConfigError);
  CHECK_THROWS_AS(lcs::validate(bad([](auto& c) { c.alpha = 0.0; })), ConfigError);
  CHECK_THROWS_AS(lcs::validate(bad([](auto& c) { c.methods = {}; })), ConfigError);
  CHECK_THROWS_AS(lcs::validate(bad([](auto& c) { c.methods = {"pc"}; })), ConfigError);
  CHECK_NOTHROW(lcs::validate(ExperimentConfig{}));
  CHECK_THROWS_AS(lcs::run_experiment(bad([](auto& c) { c.n_reps = 0; })), ConfigError);
}

TEST_CASE("experiments are reproducible and independent of thread count") {
  auto cfg = small_config();
  cfg.threads = 1;
  auto a = lcs::run_experiment(cfg);
  cfg.threads = 2;
  auto b = lcs::run_experiment(cfg);
  REQUIRE(a.rows.size() == 6);
  CHECK(lcs::results_csv(a) == lcs::results_csv(b));
  for (const auto& r : a.rows) {
    CHECK(r.method == "lcs");
    CHECK(r.x != r.y);
    CHECK(r.n_observed == 7);
    CHECK(r.error.empty());
  }
  cfg.seed = 6;
  CHECK(lcs::results_csv(lcs::run_experiment(cfg)) != lcs::results_csv(a));
}

TEST_CASE("oracle-mode experiments are sound") {
  ExperimentConfig cfg;
  cfg.n_nodes = 10;
  cfg.avg_degree = 3.0;
  cfg.n_latents = 2;
  cfg.n_samples = 0;
  cfg.n_reps = 40;
  cfg.seed = 12;
  cfg.methods = {"lcs", "ehs"};
  auto res = lcs::run_experiment(cfg);
  auto s = res.summary();
  CHECK(s["config"]["mode"] == "oracle");
  CHECK(s["methods"]["lcs"]["gac_violations"] == 0);
  CHECK(s["methods"]["lcs"]["wrong_zero"] == 0);
  CHECK(s["methods"]["lcs"]["errors"] == 0);
  CHECK(s["methods"]["ehs"]["zero"] == 0);
  for (const auto& r : res.rows) {
    bool estimated = r.estimate.has_value() && r.effect_case == lcs::EffectCase::Identifiable;
    CHECK_FALSE(estimated);
    if (r.method == "lcs" && r.effect_case == lcs::EffectCase::Zero) CHECK(r.truth == 0.0);
  }
}

TEST_CASE("experiment outputs") {
  auto cfg = small_config();
  cfg.methods = {"lcs", "ehs"};
  cfg.n_reps = 2;
  cfg.log_queries = true;
  auto res = lcs::run_experiment(cfg);
  auto csv = lcs::results_csv(res);
  std::istringstream in(csv);
  std::string header, line;
  std::getline(in, header);
  CHECK(header ==
        "rep,method,x,y,n_observed,case,rule,adjustment_set,witness,truth,estimate,re,abs_error,n_tests,gac_valid,"
        "zero_correct,capped,stop_rule,error");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 18);
  }
  CHECK(rows == 4);

  auto dir = std::filesystem::temp_directory_path() / "lcs_outputs_test";
  std::filesystem::remove_all(dir);
  lcs::write_outputs(res, dir.string());
  CHECK(std::filesystem::exists(dir / "results.csv"));
  CHECK(std::filesystem::exists(dir / "summary.json"));
  std::ifstream log(dir / "runlog.jsonl");
  int queries = 0, lines = 0;
  while (std::getline(log, line)) {
    auto e = nlohmann::json::parse(line);
    ++lines;
    queries += e["event"] == "ci";
    CHECK(e.contains("rep"));
  }
  CHECK(queries > 0);
  CHECK(lines > queries);
  auto summary = nlohmann::json::parse(std::ifstream(dir / "summary.json"));
  CHECK(summary["config"]["reps"] == 2);
  CHECK(summary["methods"].contains("ehs"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("a test budget stops runs without a verdict") {
  ExperimentConfig cfg;
  cfg.n_nodes = 12;
  cfg.n_samples = 0;
  cfg.n_reps = 4;
  cfg.seed = 5;
  cfg.max_tests = 20;
  auto res = lcs::run_experiment(cfg);
  REQUIRE_FALSE(res.rows.empty());
  for (const auto& r : res.rows) {
    CHECK(r.n_tests <= 20);
    CHECK(r.error.empty());
    if (r.capped) CHECK(r.stop_rule == "budget");
  }
  // The total conditioning blanket of x alone takes 11 tests, so every run
  // that goes past it is stopped.
  CHECK(res.summary()["methods"]["lcs"]["capped"].get<int>() > 0);
  auto s = res.summary()["methods"]["lcs"];
  CHECK(s["identifiable"].get<int>() + s["zero"].get<int>() + s["non_identifiable"].get<int>() +
            s["capped"].get<int>() ==
        static_cast<int>(res.rows.size()));
  std::istringstream in(lcs::results_csv(res));
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::istringstream fields(line);
    for (std::string x; std::getline(fields, x, ',');) f.push_back(x);
    REQUIRE(f.size() >= 18);
    if (f[17] == "budget") CHECK(f[5].empty());
    else CHECK_FALSE(f[5].empty());
  }
}

TEST_CASE("fixed network experiments") {
  lcs::MixedGraph g(lcs::GraphKind::Dag, {"A", "B", "C", "D"});
  g.add_directed("A", "B");
  g.add_directed("B", "C");
  g.add_directed("A", "D");
  g.add_directed("D", "C");
  ExperimentConfig cfg;
  cfg.network = g;
  cfg.n_latents = 0;
  cfg.n_samples = 0;
  cfg.n_reps = 5;
  auto res = lcs::run_experiment(cfg);
  for (const auto& r : res.rows) {
    CHECK(r.n_observed == 4);
    CHECK(g.index(r.x) >= 0);
  }
}
