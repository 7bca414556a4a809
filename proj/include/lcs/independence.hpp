#pragma once

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "lcs/dataset.hpp"
#include "lcs/graph.hpp"

namespace lcs {

class CiError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown by CiEngine when a query would exceed its test budget.
class BudgetExceeded : public CiError {
 public:
  using CiError::CiError;
};

struct CiQuery {
  std::string x;
  std::string y;
  NodeSet z;
};

struct CiResult {
  bool independent = false;
  double statistic = 0.0;
  bool pseudo_inverse = false;
};

class CiBackend {
 public:
  virtual ~CiBackend() = default;
  virtual const std::vector<std::string>& variables() const = 0;
  virtual CiResult test(int x, int y, std::span<const int> z) const = 0;
  // Answers w indep y | z for every w in ws.
  virtual std::vector<CiResult> test_each(std::span<const int> ws, int y, std::span<const int> z) const;
  virtual const char* name() const = 0;
};

// m-separation in a DAG or MAG over all of its nodes.
class GraphOracle : public CiBackend {
 public:
  explicit GraphOracle(MixedGraph g);
  const std::vector<std::string>& variables() const override { return g_.nodes(); }
  CiResult test(int x, int y, std::span<const int> z) const override;
  std::vector<CiResult> test_each(std::span<const int> ws, int y, std::span<const int> z) const override;
  const char* name() const override { return "oracle"; }
  const MixedGraph& graph() const { return g_; }

 private:
  MixedGraph g_;
};

// Fisher-z partial correlation test.
class FisherZ : public CiBackend {
 public:
  explicit FisherZ(const Dataset& data, double alpha = 0.05);
  const std::vector<std::string>& variables() const override { return columns_; }
  CiResult test(int x, int y, std::span<const int> z) const override;
  const char* name() const override { return "fisher_z"; }
  double alpha() const { return alpha_; }
  double threshold() const { return threshold_; }
  double partial_correlation(int x, int y, std::span<const int> z, bool* pinv = nullptr) const;

 private:
  std::vector<std::string> columns_;
  Eigen::MatrixXd corr_;
  int n_;
  double alpha_;
  double threshold_;
};

// Collects JSON records of a run. Query records are only kept when
// `log_queries` is set.
class RunLog {
 public:
  explicit RunLog(bool log_queries = true) : log_queries_(log_queries) {}
  void add(nlohmann::json entry);
  bool log_queries() const { return log_queries_; }
  std::vector<nlohmann::json> entries() const;
  void write_jsonl(std::ostream& out) const;

 private:
  bool log_queries_;
  mutable std::mutex mu_;
  std::vector<nlohmann::json> entries_;
};

// Front end shared by every consumer of CI answers. Each call counts as one
// test; nothing is cached.
class CiEngine {
 public:
  explicit CiEngine(std::shared_ptr<const CiBackend> backend);

  bool is_independent(const CiQuery& q);
  bool independent(int x, int y, std::span<const int> z);
  // One counted query per element of ws, answered in a single backend call.
  std::vector<char> independent_each(std::span<const int> ws, int y, std::span<const int> z);

  std::uint64_t test_count() const { return count_.load(); }
  void reset_count() { count_ = 0; }
  // 0 means unlimited. Queries past the budget throw BudgetExceeded and are
  // not counted.
  void set_budget(std::uint64_t max_tests) { budget_ = max_tests; }
  std::uint64_t budget() const { return budget_; }
  const std::vector<std::string>& variables() const { return backend_->variables(); }
  int index(std::string_view id) const;
  const CiBackend& backend() const { return *backend_; }

  void set_log(RunLog* log) { log_ = log; }
  RunLog* log() const { return log_; }
  void set_phase(std::string phase) { phase_ = std::move(phase); }
  const std::string& phase() const { return phase_; }

 private:
  void record(int x, int y, std::span<const int> z, const CiResult& r);
  void reserve(std::size_t n);

  std::shared_ptr<const CiBackend> backend_;
  std::atomic<std::uint64_t> count_{0};
  std::uint64_t budget_ = 0;
  RunLog* log_ = nullptr;
  std::string phase_ = "none";
};

// Restores the previous phase label on scope exit.
class PhaseScope {
 public:
  PhaseScope(CiEngine& e, std::string phase) : e_(e), prev_(e.phase()) { e_.set_phase(std::move(phase)); }
  ~PhaseScope() { e_.set_phase(prev_); }
  PhaseScope(const PhaseScope&) = delete;
  PhaseScope& operator=(const PhaseScope&) = delete;

 private:
  CiEngine& e_;
  std::string prev_;
};

}  // namespace lcs
