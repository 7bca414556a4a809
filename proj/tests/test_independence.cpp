#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "fixtures.hpp"
#include "lcs/dataset.hpp"
#include "lcs/independence.hpp"
#include "lcs/simbench.hpp"
#include "oracles.hpp"

using lcs::NodeSet;

namespace {

lcs::Dataset chain_data(int n, std::uint64_t seed) {
  auto dag = fixtures::build(lcs::GraphKind::Dag, {"a", "b", "c", "d"},
                             {{"a", "b", '>'}, {"b", "c", '>'}, {"d", "c", '>'}});
  return lcs::sample(lcs::LinearScm(dag), n, seed);
}

}  // namespace

TEST_CASE("csv parsing and round trip") {
  auto d = lcs::parse_csv("a,b\n1,2.5\n-3,4e2\n");
  REQUIRE(d.rows() == 2);
  CHECK(d.columns == std::vector<std::string>{"a", "b"});
  CHECK(d.values(1, 1) == doctest::Approx(400.0));
  CHECK(d.column("b") == 1);
  CHECK_THROWS_AS(d.column("zz"), lcs::DataError);

  auto path = std::filesystem::temp_directory_path() / "lcs_roundtrip.csv";
  lcs::write_csv(d, path.string());
  auto back = lcs::read_csv(path.string());
  CHECK(back.columns == d.columns);
  CHECK(back.values == d.values);
  std::filesystem::remove(path);
}

TEST_CASE("csv errors name the offending row") {
  CHECK_THROWS_AS(lcs::parse_csv(""), lcs::DataError);
  CHECK_THROWS_AS(lcs::parse_csv("a,a\n1,2\n"), lcs::DataError);
  try {
    lcs::parse_csv("a,b\n1,2\n3\n");
    FAIL("expected a DataError");
  } catch (const lcs::DataError& e) {
    CHECK(std::string(e.what()).find("row 3") != std::string::npos);
  }
  CHECK_THROWS_AS(lcs::parse_csv("a,b\n1,x\n"), lcs::DataError);
  CHECK_THROWS_AS(lcs::read_csv("/nonexistent/file.csv"), lcs::DataError);
}

TEST_CASE("Fisher-z partial correlation matches residual regression") {
  auto d = chain_data(2000, 5);
  lcs::FisherZ fz(d, 0.05);
  std::vector<std::vector<int>> zs{{}, {1}, {3}, {1, 3}};
  for (const auto& z : zs) {
    double want = oracle::residual_partial_corr(d, 0, 2, z);
    CHECK(fz.partial_correlation(0, 2, z) == doctest::Approx(want).epsilon(1e-9));
  }
  CHECK(fz.threshold() == doctest::Approx(1.959964).epsilon(1e-6));
}

TEST_CASE("Fisher-z decisions on a large sample follow the graph") {
  auto d = chain_data(20000, 6);
  lcs::CiEngine ci(std::make_shared<lcs::FisherZ>(d, 0.01));
  CHECK_FALSE(ci.is_independent({"a", "c", {}}));
  CHECK(ci.is_independent({"a", "c", {"b"}}));
  CHECK(ci.is_independent({"a", "d", {}}));
  CHECK_FALSE(ci.is_independent({"a", "d", {"c"}}));
  CHECK(ci.test_count() == 4);
}

TEST_CASE("Fisher-z statistic is symmetric and grows with sample size") {
  auto small = chain_data(200, 8), large = chain_data(5000, 8);
  lcs::FisherZ fs(small), fl(large);
  std::vector<int> none;
  CHECK(fs.test(0, 2, none).statistic == doctest::Approx(fs.test(2, 0, none).statistic));
  CHECK(std::abs(fl.test(0, 2, none).statistic) > std::abs(fs.test(0, 2, none).statistic));
}

TEST_CASE("collinear conditioning sets fall back to a pseudo-inverse") {
  auto d = chain_data(500, 9);
  d.columns.push_back("b2");
  d.values.conservativeResize(Eigen::NoChange, 5);
  d.values.col(4) = 2.0 * d.values.col(1);
  lcs::FisherZ fz(d);
  std::vector<int> z{1, 4};
  auto r = fz.test(0, 2, z);
  CHECK(r.pseudo_inverse);
  CHECK(std::isfinite(r.statistic));
  CHECK(r.independent);
}

TEST_CASE("Fisher-z rejects unusable data") {
  auto d = chain_data(6, 1);
  CHECK_THROWS_AS(lcs::FisherZ{d}, lcs::DataError);
  auto flat = chain_data(100, 1);
  flat.values.col(2).setConstant(1.0);
  CHECK_THROWS_AS(lcs::FisherZ{flat}, lcs::DataError);
  CHECK_THROWS_AS(lcs::FisherZ(chain_data(100, 1), 1.5), lcs::CiError);
}

TEST_CASE("graph oracle answers m-separation") {
  auto mag = fixtures::two_route_mag();
  lcs::GraphOracle o(mag);
  for (int x = 0; x < mag.size(); ++x)
    for (int y = x + 1; y < mag.size(); ++y) {
      std::vector<int> z;
      for (int v = 0; v < mag.size(); ++v)
        if (v != x && v != y && v % 3 == 0) z.push_back(v);
      CHECK(o.test(x, y, z).independent == lcs::m_separated(mag, x, y, z));
    }
  CHECK_THROWS_AS(lcs::GraphOracle(fixtures::two_route_pag()), lcs::CiError);
}

TEST_CASE("engine validates queries, counts tests and logs with phases") {
  lcs::CiEngine ci(std::make_shared<lcs::GraphOracle>(fixtures::two_route_mag()));
  CHECK_THROWS_AS(ci.is_independent({"X", "X", {}}), lcs::CiError);
  CHECK_THROWS_AS(ci.is_independent({"X", "Y", {"Y"}}), lcs::CiError);
  CHECK_THROWS_AS(ci.is_independent({"X", "nope", {}}), lcs::CiError);
  CHECK(ci.test_count() == 0);

  lcs::RunLog log;
  ci.set_log(&log);
  {
    lcs::PhaseScope p(ci, "mb");
    ci.is_independent({"V4", "V5", {}});
    ci.is_independent({"V4", "V5", {"X"}});
  }
  CHECK(ci.phase() == "none");
  CHECK(ci.test_count() == 2);
  auto entries = log.entries();
  REQUIRE(entries.size() == 2);
  CHECK(entries[0]["phase"] == "mb");
  CHECK(entries[0]["independent"] == true);
  CHECK(entries[1]["independent"] == false);
  std::ostringstream out;
  log.write_jsonl(out);
  auto text = out.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);

  lcs::RunLog quiet(false);
  ci.set_log(&quiet);
  ci.is_independent({"V4", "V5", {}});
  CHECK(quiet.entries().empty());
  ci.reset_count();
  CHECK(ci.test_count() == 0);
}

TEST_CASE("engine budget") {
  auto mag = fixtures::two_route_mag();
  lcs::CiEngine ci(std::make_shared<lcs::GraphOracle>(mag));
  ci.set_budget(3);
  ci.is_independent({"V4", "V5", {}});
  ci.is_independent({"V4", "V5", {"X"}});
  std::vector<int> ws{mag.index("V1"), mag.index("V4")};
  CHECK_THROWS_AS(ci.independent_each(ws, mag.index("Y"), {}), lcs::BudgetExceeded);
  CHECK(ci.test_count() == 2);
  ci.is_independent({"V4", "V5", {}});
  CHECK_THROWS_AS(ci.is_independent({"V4", "V5", {}}), lcs::BudgetExceeded);
  CHECK(ci.test_count() == 3);
  ci.set_budget(0);
  ci.is_independent({"V4", "V5", {}});
  CHECK(ci.test_count() == 4);
}
