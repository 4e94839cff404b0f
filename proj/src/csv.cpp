#include "drnet/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "drnet/errors.hpp"

namespace drnet {

namespace {

std::vector<double> parse_row(const std::string& line, const std::string& path, int lineno) {
  std::vector<double> row;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(field, &pos);
      while (pos < field.size() && std::isspace(static_cast<unsigned char>(field[pos]))) ++pos;
      if (pos != field.size()) throw std::invalid_argument(field);
      row.push_back(v);
    } catch (const std::exception&) {
      throw DataError(path + ":" + std::to_string(lineno) + ": not a number: '" + field + "'");
    }
  }
  return row;
}

std::vector<std::vector<double>> read_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    rows.push_back(parse_row(line, path, lineno));
    if (rows.back().empty())
      throw DataError(path + ":" + std::to_string(lineno) + ": empty row");
    if (rows.back().size() != rows.front().size())
      throw DataError(path + ":" + std::to_string(lineno) + ": expected " +
                      std::to_string(rows.front().size()) + " columns, got " +
                      std::to_string(rows.back().size()));
  }
  if (rows.empty()) throw DataError("'" + path + "' contains no data");
  return rows;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

Eigen::MatrixXd read_csv_matrix(const std::string& path) {
  const auto rows = read_rows(path);
  Eigen::MatrixXd mat(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index r = 0; r < mat.rows(); ++r)
    for (Eigen::Index c = 0; c < mat.cols(); ++c)
      mat(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  return mat;
}

Eigen::VectorXd read_csv_vector(const std::string& path) {
  const Eigen::MatrixXd mat = read_csv_matrix(path);
  if (mat.cols() != 1)
    throw DataError("'" + path + "': expected a single column, got " +
                    std::to_string(mat.cols()));
  return mat.col(0);
}

void write_csv_matrix(const std::string& path, const Eigen::MatrixXd& mat) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  for (Eigen::Index r = 0; r < mat.rows(); ++r) {
    for (Eigen::Index c = 0; c < mat.cols(); ++c) {
      if (c) out << ',';
      out << format_double(mat(r, c));
    }
    out << '\n';
  }
}

void write_csv_vector(const std::string& path, const Eigen::VectorXd& vec) {
  write_csv_matrix(path, vec);
}

}  // namespace drnet
