#include "lcs/dataset.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace lcs {

int Dataset::column(const std::string& name) const {
  for (int i = 0; i < cols(); ++i)
    if (columns[i] == name) return i;
  throw DataError("unknown column: " + name);
}

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = line.find(',', start);
    auto cell = line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
    while (!cell.empty() && (cell.front() == ' ' || cell.front() == '"')) cell.remove_prefix(1);
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '"' || cell.back() == '\r'))
      cell.remove_suffix(1);
    out.push_back(cell);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

Dataset parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  Dataset d;
  if (!std::getline(in, line)) throw DataError("empty csv");
  std::set<std::string> seen;
  for (auto c : split(line)) {
    if (c.empty()) throw DataError("empty column name");
    if (!seen.insert(std::string(c)).second) throw DataError("duplicate column: " + std::string(c));
    d.columns.emplace_back(c);
  }
  std::vector<double> flat;
  std::size_t nrows = 0, lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto cells = split(line);
    if (cells.size() != d.columns.size())
      throw DataError("row " + std::to_string(lineno) + " has " + std::to_string(cells.size()) +
                      " fields, expected " + std::to_string(d.columns.size()));
    for (auto c : cells) {
      double v = 0;
      auto [p, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
      if (ec != std::errc() || p != c.data() + c.size() || c.empty())
        throw DataError("row " + std::to_string(lineno) + ": not a number: '" + std::string(c) + "'");
      flat.push_back(v);
    }
    ++nrows;
  }
  d.values.resize(static_cast<Eigen::Index>(nrows), static_cast<Eigen::Index>(d.columns.size()));
  for (std::size_t r = 0; r < nrows; ++r)
    for (std::size_t c = 0; c < d.columns.size(); ++c)
      d.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = flat[r * d.columns.size() + c];
  return d;
}

Dataset read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

void write_csv(const Dataset& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  for (int c = 0; c < d.cols(); ++c) out << (c ? "," : "") << d.columns[c];
  out << "\n" << std::setprecision(17);
  for (int r = 0; r < d.rows(); ++r) {
    for (int c = 0; c < d.cols(); ++c) out << (c ? "," : "") << d.values(r, c);
    out << "\n";
  }
}

}  // namespace lcs
