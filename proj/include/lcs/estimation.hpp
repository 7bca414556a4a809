#pragma once

#include <string>
#include <vector>

#include "lcs/dataset.hpp"
#include "lcs/graph.hpp"

namespace lcs {

// Linear-Gaussian SCM over a DAG: v = sum_p w(p, v) p + noise_sd(v) * N(0, 1).
struct LinearScm {
  MixedGraph dag;
  std::vector<std::vector<int>> parents;
  std::vector<std::vector<double>> weights;
  std::vector<double> noise_sd;
  NodeSet latents;

  // Unit weights and unit noise on every edge of `dag`.
  explicit LinearScm(MixedGraph dag);
  LinearScm() = default;

  void set_weight(std::string_view from, std::string_view to, double w);
  double weight(std::string_view from, std::string_view to) const;
  std::vector<int> topological_order() const;
};

// OLS coefficient of x when regressing y on an intercept, x and z.
double estimate_effect_ols(const Dataset& data, std::string_view x, std::string_view y, const NodeSet& z);

// Sum over directed paths x ~> y of the product of edge weights.
double true_effect(const LinearScm& scm, std::string_view x, std::string_view y);

// |est - truth| / |truth| * 100
double relative_error(double estimate, double truth);

}  // namespace lcs
