#include "lcs/independence.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <boost/math/distributions/normal.hpp>

#include "lcs/kernels.hpp"

namespace lcs {

GraphOracle::GraphOracle(MixedGraph g) : g_(std::move(g)) {
  if (g_.kind() == GraphKind::Pag) throw CiError("oracle needs a DAG or MAG");
  auto rep = validate(g_);
  if (!rep.ok()) throw CiError("oracle graph invalid: " + rep.violations.front().detail);
}

std::vector<CiResult> CiBackend::test_each(std::span<const int> ws, int y, std::span<const int> z) const {
  std::vector<CiResult> out;
  out.reserve(ws.size());
  for (int w : ws) out.push_back(test(w, y, z));
  return out;
}

std::vector<CiResult> GraphOracle::test_each(std::span<const int> ws, int y, std::span<const int> z) const {
  Mask conn = m_connected_mask(g_, y, z);
  std::vector<CiResult> out(ws.size());
  for (std::size_t i = 0; i < ws.size(); ++i) out[i].independent = !conn[ws[i]];
  return out;
}

CiResult GraphOracle::test(int x, int y, std::span<const int> z) const {
  CiResult r;
  r.independent = m_separated(g_, x, y, z);
  return r;
}

FisherZ::FisherZ(const Dataset& data, double alpha) : columns_(data.columns), n_(data.rows()), alpha_(alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw CiError("alpha must lie in (0, 1)");
  if (n_ <= data.cols() + 3)
    throw DataError("fisher-z needs more rows than columns + 3 (" + std::to_string(n_) + " rows, " +
                    std::to_string(data.cols()) + " columns)");
  for (int c = 0; c < data.cols(); ++c) {
    const auto col = data.values.col(c);
    double mean = col.mean();
    double var = (col.array() - mean).square().sum();
    if (!(var > 0.0) || !std::isfinite(var)) throw DataError("column has zero variance: " + data.columns[c]);
  }
  corr_ = correlation_matrix(data.values);
  boost::math::normal_distribution<double> nd;
  threshold_ = boost::math::quantile(nd, 1.0 - alpha / 2.0);
}

double FisherZ::partial_correlation(int x, int y, std::span<const int> z, bool* pinv) const {
  std::vector<int> ids{x, y};
  ids.insert(ids.end(), z.begin(), z.end());
  auto k = static_cast<Eigen::Index>(ids.size());
  Eigen::MatrixXd sub(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) sub(i, j) = corr_(ids[i], ids[j]);
  bool used_pinv = false;
  Eigen::MatrixXd prec;
  if (k == 2) {
    prec = sub.inverse();
    if (std::abs(sub(0, 1)) >= 1.0 - 1e-12) used_pinv = true;
  }
  if (k > 2 || used_pinv) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(sub, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    double smax = s(0), smin = s(k - 1);
    Eigen::VectorXd inv(k);
    if (smin <= 0.0 || smax / smin > 1e12) {
      used_pinv = true;
      for (Eigen::Index i = 0; i < k; ++i) inv(i) = s(i) > smax * 1e-12 ? 1.0 / s(i) : 0.0;
    } else {
      for (Eigen::Index i = 0; i < k; ++i) inv(i) = 1.0 / s(i);
    }
    prec = svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
  }
  if (pinv) *pinv = used_pinv;
  double denom = std::sqrt(prec(0, 0) * prec(1, 1));
  double r = denom > 0.0 ? -prec(0, 1) / denom : 0.0;
  if (!std::isfinite(r)) r = 0.0;
  return std::clamp(r, -(1.0 - 1e-12), 1.0 - 1e-12);
}

CiResult FisherZ::test(int x, int y, std::span<const int> z) const {
  double dof = static_cast<double>(n_) - static_cast<double>(z.size()) - 3.0;
  if (dof <= 0.0) throw DataError("too few rows for a conditioning set of size " + std::to_string(z.size()));
  CiResult res;
  double r = partial_correlation(x, y, z, &res.pseudo_inverse);
  res.statistic = std::atanh(r) * std::sqrt(dof);
  res.independent = std::abs(res.statistic) <= threshold_;
  return res;
}

void RunLog::add(nlohmann::json entry) {
  std::lock_guard<std::mutex> lk(mu_);
  entries_.push_back(std::move(entry));
}

std::vector<nlohmann::json> RunLog::entries() const {
  std::lock_guard<std::mutex> lk(mu_);
  return entries_;
}

void RunLog::write_jsonl(std::ostream& out) const {
  std::lock_guard<std::mutex> lk(mu_);
  for (const auto& e : entries_) out << e.dump() << "\n";
}

CiEngine::CiEngine(std::shared_ptr<const CiBackend> backend) : backend_(std::move(backend)) {
  if (!backend_) throw CiError("null CI backend");
}

int CiEngine::index(std::string_view id) const {
  const auto& vars = variables();
  for (int i = 0; i < static_cast<int>(vars.size()); ++i)
    if (vars[i] == id) return i;
  throw CiError("unknown variable: " + std::string(id));
}

bool CiEngine::is_independent(const CiQuery& q) {
  std::vector<int> z;
  for (const auto& s : q.z) z.push_back(index(s));
  return independent(index(q.x), index(q.y), z);
}

namespace {

void check_query(int n, int x, int y, std::span<const int> z) {
  if (x == y) throw CiError("CI query with x == y");
  if (x < 0 || y < 0 || x >= n || y >= n) throw CiError("CI query variable out of range");
  for (int v : z) {
    if (v == x || v == y) throw CiError("conditioning set contains a query variable");
    if (v < 0 || v >= n) throw CiError("conditioning variable out of range");
  }
}

}  // namespace

void CiEngine::record(int x, int y, std::span<const int> z, const CiResult& r) {
  ++count_;
  if (!log_ || !log_->log_queries()) return;
  const auto& vars = variables();
  nlohmann::json zs = nlohmann::json::array();
  for (int v : z) zs.push_back(vars[v]);
  nlohmann::json e{{"event", "ci"}, {"phase", phase_}, {"x", vars[x]}, {"y", vars[y]},
                   {"z", zs},       {"independent", r.independent}};
  if (backend_->name() != std::string("oracle")) e["stat"] = r.statistic;
  if (r.pseudo_inverse) e["pseudo_inverse"] = true;
  log_->add(std::move(e));
}

void CiEngine::reserve(std::size_t n) {
  if (budget_ && count_.load() + n > budget_)
    throw BudgetExceeded("CI test budget of " + std::to_string(budget_) + " exhausted");
}

bool CiEngine::independent(int x, int y, std::span<const int> z) {
  check_query(static_cast<int>(variables().size()), x, y, z);
  reserve(1);
  CiResult r = backend_->test(x, y, z);
  record(x, y, z, r);
  return r.independent;
}

std::vector<char> CiEngine::independent_each(std::span<const int> ws, int y, std::span<const int> z) {
  int n = static_cast<int>(variables().size());
  for (int w : ws) check_query(n, w, y, z);
  reserve(ws.size());
  auto res = backend_->test_each(ws, y, z);
  std::vector<char> out(ws.size());
  for (std::size_t i = 0; i < ws.size(); ++i) {
    record(ws[i], y, z, res[i]);
    out[i] = res[i].independent;
  }
  return out;
}

}  // namespace lcs
