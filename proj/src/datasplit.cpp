#include "drnet/datasplit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "drnet/errors.hpp"
#include "drnet/rng.hpp"

namespace drnet {

void validate_global_data(const GlobalData& data) {
  if (data.X.rows() < 1 || data.X.cols() < 1) throw DataError("X must have at least one row and column");
  if (data.y.size() != data.X.rows())
    throw DataError("y has length " + std::to_string(data.y.size()) + " but X has " +
                    std::to_string(data.X.rows()) + " rows");
  if (!data.X.allFinite()) throw DataError("X contains a non-finite entry");
  if (!data.y.allFinite()) throw DataError("y contains a non-finite entry");
}

namespace {

void validate_masks(const GlobalData& data, const std::vector<AgentMask>& masks) {
  const int n = static_cast<int>(data.n());
  const int p = static_cast<int>(data.p());
  const int m = static_cast<int>(masks.size());
  if (m < 1) throw DataError("no agent masks given");
  std::vector<char> seen_agent(static_cast<std::size_t>(m) + 1, 0);
  for (const auto& mask : masks) {
    if (mask.agent < 1 || mask.agent > m)
      throw DataError("mask agent id " + std::to_string(mask.agent) + " outside 1.." + std::to_string(m));
    if (seen_agent[static_cast<std::size_t>(mask.agent)])
      throw DataError("duplicate mask for agent " + std::to_string(mask.agent));
    seen_agent[static_cast<std::size_t>(mask.agent)] = 1;
    for (const auto& [r, c] : mask.cells)
      if (r < 1 || r > n || c < 1 || c > p)
        throw DataError("agent " + std::to_string(mask.agent) + " cell (" + std::to_string(r) +
                        ", " + std::to_string(c) + ") outside the " + std::to_string(n) + " x " +
                        std::to_string(p) + " matrix");
    for (int r : mask.label_rows)
      if (r < 1 || r > n)
        throw DataError("agent " + std::to_string(mask.agent) + " label row " + std::to_string(r) +
                        " outside 1.." + std::to_string(n));
  }
}

}  // namespace

std::vector<DataSummand> split_from_masks(const GlobalData& data,
                                          const std::vector<AgentMask>& masks) {
  validate_global_data(data);
  validate_masks(data, masks);
  const Eigen::Index n = data.n();
  const Eigen::Index p = data.p();
  const int m = static_cast<int>(masks.size());

  // Multiplicity of every cell and label row across all agents.
  Eigen::MatrixXd cell_mult = Eigen::MatrixXd::Zero(n, p);
  Eigen::VectorXd label_mult = Eigen::VectorXd::Zero(n);
  for (const auto& mask : masks) {
    for (const auto& [r, c] : mask.cells) cell_mult(r - 1, c - 1) += 1.0;
    for (int r : mask.label_rows) label_mult(r - 1) += 1.0;
  }
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < p; ++c)
      if (cell_mult(r, c) == 0.0)
        throw DataError("coverage gap: X entry (" + std::to_string(r + 1) + ", " +
                        std::to_string(c + 1) + ") is held by no agent");
  for (Eigen::Index r = 0; r < n; ++r)
    if (label_mult(r) == 0.0)
      throw DataError("coverage gap: label row " + std::to_string(r + 1) + " is held by no agent");

  std::vector<DataSummand> out(static_cast<std::size_t>(m));
  for (auto& s : out) {
    s.X = Eigen::MatrixXd::Zero(n, p);
    s.y = Eigen::VectorXd::Zero(n);
  }
  // An entry held by k agents contributes value/k to each of them.
  for (const auto& mask : masks) {
    auto& s = out[static_cast<std::size_t>(mask.agent - 1)];
    for (const auto& [r, c] : mask.cells) s.X(r - 1, c - 1) = data.X(r - 1, c - 1) / cell_mult(r - 1, c - 1);
    for (int r : mask.label_rows) s.y(r - 1) = data.y(r - 1) / label_mult(r - 1);
  }
  return out;
}

SplitScheme split_scheme_from_name(const std::string& name) {
  if (name == "columns") return SplitScheme::Columns;
  if (name == "rows") return SplitScheme::Rows;
  if (name == "blocks") return SplitScheme::Blocks;
  if (name == "arbitrary-overlapping") return SplitScheme::ArbitraryOverlapping;
  throw DataError("unknown split scheme '" + name +
                  "' (expected columns, rows, blocks, or arbitrary-overlapping)");
}

std::string split_scheme_name(SplitScheme scheme) {
  switch (scheme) {
    case SplitScheme::Columns: return "columns";
    case SplitScheme::Rows: return "rows";
    case SplitScheme::Blocks: return "blocks";
    case SplitScheme::ArbitraryOverlapping: return "arbitrary-overlapping";
  }
  return "?";
}

namespace {

// Splits 1..total into count contiguous chunks, sizes differing by at most 1.
std::vector<std::pair<int, int>> contiguous_chunks(int total, int count) {
  std::vector<std::pair<int, int>> chunks;
  const int base = total / count;
  const int extra = total % count;
  int start = 1;
  for (int i = 0; i < count; ++i) {
    const int len = base + (i < extra ? 1 : 0);
    chunks.emplace_back(start, start + len - 1);
    start += len;
  }
  return chunks;
}

std::vector<AgentMask> columns_masks(int n, int p, int m) {
  if (m > p) throw DataError("columns split needs m <= p (m=" + std::to_string(m) + ", p=" + std::to_string(p) + ")");
  std::vector<AgentMask> masks(static_cast<std::size_t>(m));
  const auto chunks = contiguous_chunks(p, m);
  for (int a = 1; a <= m; ++a) {
    auto& mask = masks[static_cast<std::size_t>(a - 1)];
    mask.agent = a;
    for (int c = chunks[static_cast<std::size_t>(a - 1)].first; c <= chunks[static_cast<std::size_t>(a - 1)].second; ++c)
      for (int r = 1; r <= n; ++r) mask.cells.emplace(r, c);
  }
  for (int r = 1; r <= n; ++r) masks[0].label_rows.insert(r);
  return masks;
}

std::vector<AgentMask> rows_masks(int n, int p, int m) {
  if (m > n) throw DataError("rows split needs m <= n (m=" + std::to_string(m) + ", n=" + std::to_string(n) + ")");
  std::vector<AgentMask> masks(static_cast<std::size_t>(m));
  const auto chunks = contiguous_chunks(n, m);
  for (int a = 1; a <= m; ++a) {
    auto& mask = masks[static_cast<std::size_t>(a - 1)];
    mask.agent = a;
    for (int r = chunks[static_cast<std::size_t>(a - 1)].first; r <= chunks[static_cast<std::size_t>(a - 1)].second; ++r) {
      mask.label_rows.insert(r);
      for (int c = 1; c <= p; ++c) mask.cells.emplace(r, c);
    }
  }
  return masks;
}

std::vector<AgentMask> blocks_masks(int n, int p, int m) {
  // Grid of gr x gc = m blocks with gr as close to sqrt(m) as divisibility allows.
  int gr = static_cast<int>(std::sqrt(static_cast<double>(m)));
  while (gr > 1 && m % gr != 0) --gr;
  const int gc = m / gr;
  if (gr > n || gc > p)
    throw DataError("blocks split of " + std::to_string(m) + " agents needs a " + std::to_string(gr) +
                    " x " + std::to_string(gc) + " grid, infeasible for " + std::to_string(n) + " x " +
                    std::to_string(p) + " data");
  const auto row_chunks = contiguous_chunks(n, gr);
  const auto col_chunks = contiguous_chunks(p, gc);
  std::vector<AgentMask> masks(static_cast<std::size_t>(m));
  for (int br = 0; br < gr; ++br) {
    for (int bc = 0; bc < gc; ++bc) {
      const int a = br * gc + bc + 1;
      auto& mask = masks[static_cast<std::size_t>(a - 1)];
      mask.agent = a;
      for (int r = row_chunks[static_cast<std::size_t>(br)].first; r <= row_chunks[static_cast<std::size_t>(br)].second; ++r)
        for (int c = col_chunks[static_cast<std::size_t>(bc)].first; c <= col_chunks[static_cast<std::size_t>(bc)].second; ++c)
          mask.cells.emplace(r, c);
      if (bc == 0)
        for (int r = row_chunks[static_cast<std::size_t>(br)].first; r <= row_chunks[static_cast<std::size_t>(br)].second; ++r)
          mask.label_rows.insert(r);
    }
  }
  return masks;
}

// Non-rectangular seeded regions: every cell goes to the agent whose seed
// cell is nearest in jittered L1 distance, then a fraction of cells gains a
// second holder. Label rows get one uniformly drawn owner each, with the
// same overlap fraction.
std::vector<AgentMask> overlapping_masks(int n, int p, int m, std::uint64_t seed, double fraction) {
  if (m > n * p) throw DataError("arbitrary-overlapping split needs m <= n*p");
  if (!(fraction >= 0.0 && fraction < 1.0)) throw DataError("overlap fraction must be in [0, 1)");
  Rng rng(seed);

  std::vector<std::pair<int, int>> seeds;
  while (static_cast<int>(seeds.size()) < m) {
    const std::pair<int, int> cand{rng.uniform_int(1, n), rng.uniform_int(1, p)};
    if (std::find(seeds.begin(), seeds.end(), cand) == seeds.end()) seeds.push_back(cand);
  }

  std::vector<AgentMask> masks(static_cast<std::size_t>(m));
  for (int a = 1; a <= m; ++a) masks[static_cast<std::size_t>(a - 1)].agent = a;

  std::vector<int> owner(static_cast<std::size_t>(n * p), 0);
  for (int r = 1; r <= n; ++r) {
    for (int c = 1; c <= p; ++c) {
      int best = 1;
      double best_dist = 1e300;
      for (int a = 1; a <= m; ++a) {
        const auto& [sr, sc] = seeds[static_cast<std::size_t>(a - 1)];
        const double dist = std::abs(r - sr) + std::abs(c - sc) + rng.uniform01();
        if (dist < best_dist) {
          best_dist = dist;
          best = a;
        }
      }
      owner[static_cast<std::size_t>((r - 1) * p + (c - 1))] = best;
      masks[static_cast<std::size_t>(best - 1)].cells.emplace(r, c);
    }
  }

  // Second holders for a random sample of cells.
  const int extra = std::max(1, static_cast<int>(std::lround(fraction * n * p)));
  std::vector<int> order(static_cast<std::size_t>(n * p));
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  for (std::size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(i) - 1))]);
  for (int e = 0; e < extra && e < n * p; ++e) {
    const int idx = order[static_cast<std::size_t>(e)];
    const int r = idx / p + 1, c = idx % p + 1;
    const int first = owner[static_cast<std::size_t>(idx)];
    int second = rng.uniform_int(1, m - 1);
    if (second >= first) ++second;
    masks[static_cast<std::size_t>(second - 1)].cells.emplace(r, c);
  }

  std::vector<int> label_owner(static_cast<std::size_t>(n), 0);
  for (int r = 1; r <= n; ++r) {
    const int a = rng.uniform_int(1, m);
    label_owner[static_cast<std::size_t>(r - 1)] = a;
    masks[static_cast<std::size_t>(a - 1)].label_rows.insert(r);
  }
  const int label_extra = static_cast<int>(std::lround(fraction * n));
  for (int e = 0; e < label_extra; ++e) {
    const int r = rng.uniform_int(1, n);
    const int first = label_owner[static_cast<std::size_t>(r - 1)];
    int second = rng.uniform_int(1, m - 1);
    if (second >= first) ++second;
    masks[static_cast<std::size_t>(second - 1)].label_rows.insert(r);
  }
  return masks;
}

}  // namespace

std::vector<AgentMask> preset_masks(SplitScheme scheme, int n, int p, int m, std::uint64_t seed,
                                    double overlap_fraction) {
  if (n < 1 || p < 1) throw DataError("data shape must be at least 1 x 1");
  if (m < 1) throw DataError("need at least one agent");
  switch (scheme) {
    case SplitScheme::Columns: return columns_masks(n, p, m);
    case SplitScheme::Rows: return rows_masks(n, p, m);
    case SplitScheme::Blocks: return blocks_masks(n, p, m);
    case SplitScheme::ArbitraryOverlapping: return overlapping_masks(n, p, m, seed, overlap_fraction);
  }
  throw DataError("unknown split scheme");
}

std::vector<AgentMask> parse_masks(std::istream& in, int m, const std::string& source) {
  std::vector<AgentMask> masks(static_cast<std::size_t>(m));
  for (int a = 1; a <= m; ++a) masks[static_cast<std::size_t>(a - 1)].agent = a;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string tag, kind;
    int agent = 0;
    if (!(ss >> tag >> agent >> kind) || tag != "agent")
      throw DataError(source + ":" + std::to_string(lineno) + ": expected 'agent <i> cell|label ...'");
    if (agent < 1 || agent > m)
      throw DataError(source + ":" + std::to_string(lineno) + ": agent " + std::to_string(agent) +
                      " outside 1.." + std::to_string(m));
    auto& mask = masks[static_cast<std::size_t>(agent - 1)];
    if (kind == "cell") {
      int r = 0, c = 0;
      if (!(ss >> r >> c)) throw DataError(source + ":" + std::to_string(lineno) + ": bad cell line");
      mask.cells.emplace(r, c);
    } else if (kind == "label") {
      int r = 0;
      if (!(ss >> r)) throw DataError(source + ":" + std::to_string(lineno) + ": bad label line");
      mask.label_rows.insert(r);
    } else {
      throw DataError(source + ":" + std::to_string(lineno) + ": unknown entry kind '" + kind + "'");
    }
  }
  return masks;
}

std::vector<AgentMask> read_mask_file(const std::string& path, int m) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open mask file '" + path + "'");
  return parse_masks(in, m, path);
}

void write_mask_file(const std::string& path, const std::vector<AgentMask>& masks) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write mask file '" + path + "'");
  for (const auto& mask : masks) {
    for (const auto& [r, c] : mask.cells) out << "agent " << mask.agent << " cell " << r << ' ' << c << '\n';
    for (int r : mask.label_rows) out << "agent " << mask.agent << " label " << r << '\n';
  }
}

}  // namespace drnet
