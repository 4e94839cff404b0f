#include "drnet/topology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "drnet/errors.hpp"
#include "drnet/rng.hpp"

namespace drnet {

namespace {

std::vector<std::pair<int, int>> canonicalize(int m,
                                              const std::vector<std::pair<int, int>>& edge_list) {
  std::set<std::pair<int, int>> canon;
  for (const auto& [a, b] : edge_list) {
    if (a < 1 || a > m || b < 1 || b > m)
      throw std::invalid_argument("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                                  ") out of range for m=" + std::to_string(m));
    if (a == b) throw std::invalid_argument("self-loop at node " + std::to_string(a));
    canon.emplace(std::min(a, b), std::max(a, b));
  }
  return {canon.begin(), canon.end()};
}

// BFS from node 1 over canonical edges.
bool reaches_all(int m, const std::vector<std::pair<int, int>>& canon) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(m) + 1);
  for (const auto& [i, j] : canon) {
    adj[static_cast<std::size_t>(i)].push_back(j);
    adj[static_cast<std::size_t>(j)].push_back(i);
  }
  std::vector<char> seen(static_cast<std::size_t>(m) + 1, 0);
  std::deque<int> queue{1};
  seen[1] = 1;
  int count = 1;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v : adj[static_cast<std::size_t>(u)]) {
      if (!seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = 1;
        ++count;
        queue.push_back(v);
      }
    }
  }
  return count == m;
}

}  // namespace

Network Network::from_edges(int m, const std::vector<std::pair<int, int>>& edge_list) {
  if (m < 2) throw std::invalid_argument("network needs at least 2 nodes, got m=" + std::to_string(m));
  Network net;
  net.m_ = m;
  net.edges_ = canonicalize(m, edge_list);
  if (!reaches_all(m, net.edges_)) throw std::invalid_argument("network is disconnected");
  net.neighbors_.assign(static_cast<std::size_t>(m), {});
  for (const auto& [i, j] : net.edges_) {
    net.neighbors_[static_cast<std::size_t>(i - 1)].push_back(j);
    net.neighbors_[static_cast<std::size_t>(j - 1)].push_back(i);
  }
  for (auto& list : net.neighbors_) std::sort(list.begin(), list.end());
  return net;
}

const std::vector<int>& Network::neighbors(int node) const {
  if (node < 1 || node > m_) throw std::invalid_argument("node " + std::to_string(node) + " out of range");
  return neighbors_[static_cast<std::size_t>(node - 1)];
}

bool Network::has_edge(int i, int j) const {
  if (i == j || i < 1 || j < 1 || i > m_ || j > m_) return false;
  const auto key = std::make_pair(std::min(i, j), std::max(i, j));
  return std::binary_search(edges_.begin(), edges_.end(), key);
}

int Network::edge_index(int i, int j) const {
  const auto key = std::make_pair(std::min(i, j), std::max(i, j));
  const auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
  if (it == edges_.end() || *it != key)
    throw std::invalid_argument("no edge between " + std::to_string(i) + " and " + std::to_string(j));
  return static_cast<int>(it - edges_.begin());
}

std::string Network::to_text() const {
  std::ostringstream out;
  out << "m " << m_ << '\n';
  for (const auto& [i, j] : edges_) out << "edge " << i << ' ' << j << '\n';
  return out.str();
}

Network Network::from_text(std::istream& in) {
  std::string line;
  int m = 0;
  bool have_m = false;
  std::vector<std::pair<int, int>> edges;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "m") {
      if (!(ss >> m)) throw DataError("network line " + std::to_string(lineno) + ": bad node count");
      have_m = true;
    } else if (tag == "edge") {
      int i = 0, j = 0;
      if (!(ss >> i >> j)) throw DataError("network line " + std::to_string(lineno) + ": bad edge");
      edges.emplace_back(i, j);
    } else {
      throw DataError("network line " + std::to_string(lineno) + ": unknown tag '" + tag + "'");
    }
  }
  if (!have_m) throw DataError("network text is missing the 'm <count>' line");
  try {
    return from_edges(m, edges);
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("invalid network: ") + e.what());
  }
}

Network Network::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open network file '" + path + "'");
  return from_text(in);
}

bool is_connected(int m, const std::vector<std::pair<int, int>>& edge_list) {
  if (m < 1) return false;
  if (m == 1) return true;
  return reaches_all(m, canonicalize(m, edge_list));
}

bool is_connected(const Network& net) { return is_connected(net.size(), net.edges()); }

Network random_walk_network_draws(int m, const std::function<int()>& draw, long long max_draws) {
  if (m < 2) throw std::invalid_argument("network needs at least 2 nodes, got m=" + std::to_string(m));
  const auto next = [&]() {
    const int v = draw();
    if (v < 1 || v > m) throw std::invalid_argument("draw " + std::to_string(v) + " outside 1.." + std::to_string(m));
    return v;
  };
  std::vector<char> seen(static_cast<std::size_t>(m) + 1, 0);
  std::vector<std::pair<int, int>> edges;
  long long draws = 1;
  int prev = next();
  seen[static_cast<std::size_t>(prev)] = 1;
  int covered = 1;
  while (covered < m) {
    if (draws >= max_draws)
      throw std::runtime_error("random walk did not cover all nodes within " +
                               std::to_string(max_draws) + " draws");
    const int cur = next();
    ++draws;
    if (cur != prev) edges.emplace_back(std::min(prev, cur), std::max(prev, cur));
    if (!seen[static_cast<std::size_t>(cur)]) {
      seen[static_cast<std::size_t>(cur)] = 1;
      ++covered;
    }
    prev = cur;
  }
  return Network::from_edges(m, edges);
}

Network random_walk_network(int m, std::uint64_t seed) {
  if (m < 2) throw std::invalid_argument("network needs at least 2 nodes, got m=" + std::to_string(m));
  Rng rng(seed);
  const auto cap = static_cast<long long>(10.0 * m * std::log(static_cast<double>(m)) + 1000.0);
  return random_walk_network_draws(m, [&] { return rng.uniform_int(1, m); }, cap);
}

}  // namespace drnet
