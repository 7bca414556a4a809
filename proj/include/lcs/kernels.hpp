#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace lcs {

// Pearson correlation of the columns of `data`. The parallel version splits
// column pairs across OpenMP threads; both produce bitwise equal results.
Eigen::MatrixXd correlation_matrix(const Eigen::MatrixXd& data);
Eigen::MatrixXd correlation_matrix_serial(const Eigen::MatrixXd& data);

// Linear-Gaussian ancestral sampling. `order` is a topological order,
// parents[v] / weights[v] list the incoming edges of v. Noise for (row, v)
// is drawn from the Philox coordinate (row, v) under `seed`.
struct LinearModelView {
  const std::vector<int>* order;
  const std::vector<std::vector<int>>* parents;
  const std::vector<std::vector<double>>* weights;
  const std::vector<double>* noise_sd;
};

Eigen::MatrixXd sample_rows(const LinearModelView& m, int n, std::uint64_t seed);
Eigen::MatrixXd sample_rows_serial(const LinearModelView& m, int n, std::uint64_t seed);

}  // namespace lcs
