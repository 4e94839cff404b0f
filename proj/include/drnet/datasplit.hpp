#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace drnet {

/// Full regression data: X is n x p (examples x features), y has length n.
struct GlobalData {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;

  Eigen::Index n() const { return X.rows(); }
  Eigen::Index p() const { return X.cols(); }
};

/// Throws DataError unless X and y have matching, nonempty shapes and all
/// entries are finite.
void validate_global_data(const GlobalData& data);

/// The part of (X, y) one agent holds, as 1-based index sets.
struct AgentMask {
  int agent = 0;                          // 1..m
  std::set<std::pair<int, int>> cells;    // (row, col) into X
  std::set<int> label_rows;               // rows of y
};

/// One agent's additive share of the data. Same shape as the global data;
/// entries the agent does not hold are zero, and entries held by k agents
/// carry value/k, so the shares sum back to (X, y) exactly.
struct DataSummand {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
};

/// Builds the summand decomposition from per-agent masks. Requires one
/// mask per agent with ids covering 1..m exactly, and joint coverage of
/// every entry of X and every row of y; throws DataError naming the first
/// uncovered index otherwise.
std::vector<DataSummand> split_from_masks(const GlobalData& data,
                                          const std::vector<AgentMask>& masks);

enum class SplitScheme { Columns, Rows, Blocks, ArbitraryOverlapping };

SplitScheme split_scheme_from_name(const std::string& name);  // throws DataError
std::string split_scheme_name(SplitScheme scheme);

/// Canned mask layouts:
///   Columns  - contiguous feature blocks, all labels to agent 1
///   Rows     - contiguous example blocks with matching label rows
///   Blocks   - grid partition of X, labels follow the block rows
///   ArbitraryOverlapping - seeded non-rectangular regions where a fraction
///   of cells (default 10%) is held by two agents
std::vector<AgentMask> preset_masks(SplitScheme scheme, int n, int p, int m,
                                    std::uint64_t seed, double overlap_fraction = 0.10);

/// Mask file format: one "agent <i> cell <row> <col>" or
/// "agent <i> label <row>" per line.
std::vector<AgentMask> read_mask_file(const std::string& path, int m);
std::vector<AgentMask> parse_masks(std::istream& in, int m, const std::string& source);
void write_mask_file(const std::string& path, const std::vector<AgentMask>& masks);

}  // namespace drnet
