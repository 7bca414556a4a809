#include "lcs/estimation.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

namespace lcs {

LinearScm::LinearScm(MixedGraph g) : dag(std::move(g)) {
  if (dag.kind() != GraphKind::Dag) throw GraphError("SCM needs a DAG");
  auto rep = validate(dag);
  if (!rep.ok()) throw GraphError("invalid DAG: " + rep.violations.front().detail);
  int n = dag.size();
  parents.resize(n);
  weights.resize(n);
  noise_sd.assign(n, 1.0);
  for (int v = 0; v < n; ++v) {
    parents[v] = dag.parents(v);
    weights[v].assign(parents[v].size(), 1.0);
  }
}

void LinearScm::set_weight(std::string_view from, std::string_view to, double w) {
  int a = dag.index(from), b = dag.index(to);
  for (std::size_t k = 0; k < parents[b].size(); ++k)
    if (parents[b][k] == a) {
      weights[b][k] = w;
      return;
    }
  throw GraphError("no edge " + std::string(from) + " -> " + std::string(to));
}

double LinearScm::weight(std::string_view from, std::string_view to) const {
  int a = dag.index(from), b = dag.index(to);
  for (std::size_t k = 0; k < parents[b].size(); ++k)
    if (parents[b][k] == a) return weights[b][k];
  return 0.0;
}

std::vector<int> LinearScm::topological_order() const {
  int n = dag.size();
  std::vector<int> indeg(n), order;
  for (int v = 0; v < n; ++v) indeg[v] = static_cast<int>(parents[v].size());
  std::deque<int> q;
  for (int v = 0; v < n; ++v)
    if (!indeg[v]) q.push_back(v);
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    order.push_back(v);
    for (int c : dag.children(v))
      if (--indeg[c] == 0) q.push_back(c);
  }
  return order;
}

double estimate_effect_ols(const Dataset& data, std::string_view x, std::string_view y, const NodeSet& z) {
  if (x == y) throw DataError("treatment and outcome coincide");
  std::vector<int> cols{data.column(std::string(x))};
  std::vector<std::string> names{std::string(x)};
  for (const auto& v : z) {
    if (v == x || v == y) throw DataError("adjustment set contains treatment or outcome");
    cols.push_back(data.column(v));
    names.push_back(v);
  }
  int yc = data.column(std::string(y));
  Eigen::Index n = data.values.rows();
  Eigen::Index k = static_cast<Eigen::Index>(cols.size()) + 1;
  if (n < k) throw DataError("fewer rows than regressors");
  Eigen::MatrixXd X(n, k);
  X.col(0).setOnes();
  for (Eigen::Index j = 1; j < k; ++j) X.col(j) = data.values.col(cols[j - 1]);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  if (qr.rank() < k) {
    std::string bad;
    auto perm = qr.colsPermutation().indices();
    for (Eigen::Index i = qr.rank(); i < k; ++i) {
      auto c = perm(i);
      bad += (bad.empty() ? "" : ", ") + (c == 0 ? std::string("intercept") : names[c - 1]);
    }
    throw DataError("design matrix is rank deficient; dependent columns: " + bad);
  }
  Eigen::VectorXd beta = qr.solve(data.values.col(yc));
  return beta(1);
}

double true_effect(const LinearScm& scm, std::string_view x, std::string_view y) {
  int xi = scm.dag.index(x), yi = scm.dag.index(y);
  if (xi == yi) return 1.0;
  std::vector<double> eff(scm.dag.size(), 0.0);
  eff[xi] = 1.0;
  bool after = false;
  for (int v : scm.topological_order()) {
    if (v == xi) {
      after = true;
      continue;
    }
    if (!after) continue;
    double s = 0.0;
    for (std::size_t k = 0; k < scm.parents[v].size(); ++k) s += scm.weights[v][k] * eff[scm.parents[v][k]];
    eff[v] = s;
  }
  return eff[yi];
}

double relative_error(double estimate, double truth) {
  if (truth == 0.0) throw std::domain_error("relative error undefined for a zero effect");
  return std::abs(estimate - truth) / std::abs(truth) * 100.0;
}

}  // namespace lcs
