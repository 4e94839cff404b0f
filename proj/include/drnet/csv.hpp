#pragma once

#include <Eigen/Core>
#include <string>

namespace drnet {

// Plain comma-separated numeric files. Matrices are one row per line;
// vectors are a single column. Values are written with enough digits to
// round-trip exactly.

Eigen::MatrixXd read_csv_matrix(const std::string& path);
Eigen::VectorXd read_csv_vector(const std::string& path);
void write_csv_matrix(const std::string& path, const Eigen::MatrixXd& mat);
void write_csv_vector(const std::string& path, const Eigen::VectorXd& vec);

/// Shortest representation that parses back to the same double.
std::string format_double(double x);

}  // namespace drnet
