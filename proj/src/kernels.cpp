#include "lcs/kernels.hpp"

#include <cmath>

#include "lcs/rng.hpp"

namespace lcs {

namespace {

double column_dot(const Eigen::MatrixXd& c, Eigen::Index i, Eigen::Index j) {
  double s = 0.0;
  const double* a = c.col(i).data();
  const double* b = c.col(j).data();
  for (Eigen::Index r = 0; r < c.rows(); ++r) s += a[r] * b[r];
  return s;
}

Eigen::MatrixXd centered(const Eigen::MatrixXd& data) {
  Eigen::MatrixXd c = data;
  for (Eigen::Index j = 0; j < c.cols(); ++j) {
    double m = 0.0;
    for (Eigen::Index r = 0; r < c.rows(); ++r) m += c(r, j);
    m /= static_cast<double>(c.rows());
    for (Eigen::Index r = 0; r < c.rows(); ++r) c(r, j) -= m;
  }
  return c;
}

void finish(Eigen::MatrixXd& out) {
  Eigen::Index p = out.cols();
  Eigen::VectorXd sd(p);
  for (Eigen::Index j = 0; j < p; ++j) sd(j) = std::sqrt(out(j, j));
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < p; ++j)
      out(i, j) = i == j ? 1.0 : out(i, j) / (sd(i) * sd(j));
}

double draw(const LinearModelView& m, const double* row, int v, std::int64_t r, std::uint64_t seed) {
  double x = (*m.noise_sd)[v] * philox_normal(seed, static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(v));
  const auto& pa = (*m.parents)[v];
  const auto& w = (*m.weights)[v];
  for (std::size_t k = 0; k < pa.size(); ++k) x += w[k] * row[pa[k]];
  return x;
}

}  // namespace

Eigen::MatrixXd correlation_matrix_serial(const Eigen::MatrixXd& data) {
  Eigen::MatrixXd c = centered(data);
  Eigen::Index p = c.cols();
  Eigen::MatrixXd out(p, p);
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = i; j < p; ++j) out(i, j) = out(j, i) = column_dot(c, i, j);
  finish(out);
  return out;
}

Eigen::MatrixXd correlation_matrix(const Eigen::MatrixXd& data) {
  Eigen::MatrixXd c = centered(data);
  Eigen::Index p = c.cols();
  Eigen::MatrixXd out(p, p);
  std::int64_t pairs = static_cast<std::int64_t>(p) * p;
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t k = 0; k < pairs; ++k) {
    Eigen::Index i = k / p, j = k % p;
    if (j >= i) out(i, j) = out(j, i) = column_dot(c, i, j);
  }
  finish(out);
  return out;
}

Eigen::MatrixXd sample_rows_serial(const LinearModelView& m, int n, std::uint64_t seed) {
  int p = static_cast<int>(m.order->size());
  Eigen::MatrixXd out(n, p);
  std::vector<double> row(p);
  for (int r = 0; r < n; ++r) {
    for (int v : *m.order) row[v] = draw(m, row.data(), v, r, seed);
    for (int v = 0; v < p; ++v) out(r, v) = row[v];
  }
  return out;
}

Eigen::MatrixXd sample_rows(const LinearModelView& m, int n, std::uint64_t seed) {
  int p = static_cast<int>(m.order->size());
  Eigen::MatrixXd out(n, p);
#pragma omp parallel
  {
    std::vector<double> row(p);
#pragma omp for schedule(static)
    for (int r = 0; r < n; ++r) {
      for (int v : *m.order) row[v] = draw(m, row.data(), v, r, seed);
      for (int v = 0; v < p; ++v) out(r, v) = row[v];
    }
  }
  return out;
}

}  // namespace lcs
