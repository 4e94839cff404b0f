#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace drnet {

/// Connected undirected graph of agents labeled 1..m. Edges are stored as
/// canonical ordered pairs (i, j) with i < j; neighbor lists are ascending.
/// Immutable after construction, safe to share across threads.
class Network {
 public:
  /// An empty placeholder (m = 0); real networks come from the factories.
  Network() = default;

  /// Builds and validates a network. Duplicate pairs and reversed
  /// duplicates collapse to a single edge. Throws std::invalid_argument on
  /// m < 2, out-of-range labels, self-loops, or a disconnected graph.
  static Network from_edges(int m, const std::vector<std::pair<int, int>>& edge_list);

  int size() const { return m_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int node) const;
  int degree(int node) const { return static_cast<int>(neighbors(node).size()); }
  bool has_edge(int i, int j) const;

  /// Index of edge {i, j} into edges(); order of i, j does not matter.
  int edge_index(int i, int j) const;

  /// Line-oriented text form: "m <count>" then one "edge <i> <j>" per edge.
  std::string to_text() const;
  static Network from_text(std::istream& in);
  static Network from_file(const std::string& path);  // throws DataError

 private:
  int m_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> neighbors_;
};

/// True iff every node is reachable from node 1.
bool is_connected(int m, const std::vector<std::pair<int, int>>& edge_list);
bool is_connected(const Network& net);

/// Generates a connected network by a random walk: nodes are drawn
/// uniformly with replacement, consecutively drawn distinct nodes become
/// neighbors, and drawing stops once every node has appeared. A safety cap
/// of 10*m*ln(m)+1000 draws turns the probabilistic termination guarantee
/// into a hard error.
Network random_walk_network(int m, std::uint64_t seed);

/// Same procedure with an explicit draw source (must yield labels in
/// 1..m); used to replay documented draw sequences.
Network random_walk_network_draws(int m, const std::function<int()>& draw, long long max_draws);

}  // namespace drnet
