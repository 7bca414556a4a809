#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lcs {

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Column-labelled numeric table. Rows are samples.
struct Dataset {
  std::vector<std::string> columns;
  Eigen::MatrixXd values;

  int rows() const { return static_cast<int>(values.rows()); }
  int cols() const { return static_cast<int>(values.cols()); }
  int column(const std::string& name) const;
};

// Header line of node ids, then numeric rows. '.' is the decimal separator.
Dataset read_csv(const std::string& path);
Dataset parse_csv(const std::string& text);
void write_csv(const Dataset& d, const std::string& path);

}  // namespace lcs
