#include "drnet/simnet.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "drnet/csv.hpp"
#include "drnet/errors.hpp"
#include "drnet/rng.hpp"

namespace drnet {

double relative_error(const Eigen::VectorXd& estimate, const Eigen::VectorXd& reference,
                      bool* used_absolute) {
  const double ref_norm = reference.norm();
  const double dist = (estimate - reference).norm();
  if (ref_norm == 0.0) {
    if (used_absolute) *used_absolute = true;
    return dist;
  }
  if (used_absolute) *used_absolute = false;
  return dist / ref_norm;
}

Simulator::Simulator(const Network& net, std::vector<NodeLocal> locals,
                     std::shared_ptr<const Regularizer> f, double lambda, double rho)
    : net_(net), locals_(std::move(locals)), f_(std::move(f)), lambda_(lambda), rho_(rho) {
  if (static_cast<int>(locals_.size()) != net_.size())
    throw std::invalid_argument("one NodeLocal per network node required");
  if (!(lambda_ > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (!(rho_ > 0.0 && rho_ < 2.0)) throw std::invalid_argument("rho must lie in (0, 2)");
  n_ = locals_.front().n();
  p_ = locals_.front().p();
  for (const auto& local : locals_)
    if (local.n() != n_ || local.p() != p_)
      throw std::invalid_argument("node data shapes disagree");
  init_zeros();
}

void Simulator::init_zeros() {
  state_.assign(net_.edges().size(),
                EdgeVars{Eigen::VectorXd::Zero(n_), Eigen::VectorXd::Zero(p_),
                         Eigen::VectorXd::Zero(n_), Eigen::VectorXd::Zero(p_)});
  beta_hat_.assign(static_cast<std::size_t>(net_.size()), Eigen::VectorXd::Zero(p_));
  alpha_hat_.assign(static_cast<std::size_t>(net_.size()), Eigen::VectorXd::Zero(n_));
  round_ = 0;
  last_step_norm_ = 0.0;
  ledger_.clear();
  message_count_ = 0;
}

void Simulator::init_random(std::uint64_t seed) {
  init_zeros();
  Rng rng(seed);
  for (auto& vars : state_) {
    for (Eigen::Index i = 0; i < n_; ++i) vars.a_fw[i] = rng.standard_normal();
    for (Eigen::Index i = 0; i < p_; ++i) vars.b_fw[i] = rng.standard_normal();
    for (Eigen::Index i = 0; i < n_; ++i) vars.a_bw[i] = rng.standard_normal();
    for (Eigen::Index i = 0; i < p_; ++i) vars.b_bw[i] = rng.standard_normal();
  }
}

const Eigen::VectorXd& Simulator::dir_a(const std::vector<EdgeVars>& s, int i, int j) const {
  const auto e = static_cast<std::size_t>(net_.edge_index(i, j));
  return i < j ? s[e].a_fw : s[e].a_bw;
}

const Eigen::VectorXd& Simulator::dir_b(const std::vector<EdgeVars>& s, int i, int j) const {
  const auto e = static_cast<std::size_t>(net_.edge_index(i, j));
  return i < j ? s[e].b_fw : s[e].b_bw;
}

const Eigen::VectorXd& Simulator::a(int i, int j) const { return dir_a(state_, i, j); }
const Eigen::VectorXd& Simulator::b(int i, int j) const { return dir_b(state_, i, j); }

const Eigen::VectorXd& Simulator::beta_hat(int node) const {
  return beta_hat_.at(static_cast<std::size_t>(node - 1));
}

const Eigen::VectorXd& Simulator::alpha_hat(int node) const {
  return alpha_hat_.at(static_cast<std::size_t>(node - 1));
}

double Simulator::state_norm() const {
  double sq = 0.0;
  for (const auto& vars : state_)
    sq += vars.a_fw.squaredNorm() + vars.b_fw.squaredNorm() + vars.a_bw.squaredNorm() +
          vars.b_bw.squaredNorm();
  return std::sqrt(sq);
}

void Simulator::step() {
  // Deliver: both directions of every edge, carrying the current iterates.
  // The delivered snapshot is the only cross-agent input below, which
  // keeps the round synchronous while agents overwrite their own state.
  const std::vector<EdgeVars> delivered = state_;
  for (const auto& [i, j] : net_.edges()) {
    if (record_ledger_) {
      ledger_.push_back({round_, i, j, dir_a(delivered, i, j), dir_b(delivered, i, j)});
      ledger_.push_back({round_, j, i, dir_a(delivered, j, i), dir_b(delivered, j, i)});
    }
    message_count_ += 2;
  }

  double step_sq = 0.0;
  for (int i = 1; i <= net_.size(); ++i) {
    const auto& neighbors = net_.neighbors(i);
    std::vector<NeighborExchange> exchanges;
    std::vector<Eigen::VectorXd> f_values;
    exchanges.reserve(neighbors.size());
    f_values.reserve(neighbors.size());
    for (int j : neighbors) {
      NeighborExchange ex;
      ex.a_own = dir_a(delivered, i, j);
      ex.b_own = dir_b(delivered, i, j);
      ex.a_in = dir_a(delivered, j, i);
      ex.b_in = dir_b(delivered, j, i);
      f_values.push_back(dilated_prox(*f_, lambda_, ex.b_own + ex.b_in));
      exchanges.push_back(std::move(ex));
    }

    const NodeSolveResult sol = node_subproblem(locals_[static_cast<std::size_t>(i - 1)],
                                                exchanges, *f_, lambda_);
    beta_hat_[static_cast<std::size_t>(i - 1)] = sol.beta;
    alpha_hat_[static_cast<std::size_t>(i - 1)] = sol.alpha;

    for (std::size_t idx = 0; idx < neighbors.size(); ++idx) {
      const int j = neighbors[idx];
      auto [a_next, b_next] =
          dr_update_regression(rho_, exchanges[idx].a_own, exchanges[idx].a_in,
                               exchanges[idx].b_own, f_values[idx], sol.a_shares[idx], sol.beta);
      step_sq += (a_next - exchanges[idx].a_own).squaredNorm() +
                 (b_next - exchanges[idx].b_own).squaredNorm();
      const auto e = static_cast<std::size_t>(net_.edge_index(i, j));
      if (i < j) {
        state_[e].a_fw = std::move(a_next);
        state_[e].b_fw = std::move(b_next);
      } else {
        state_[e].a_bw = std::move(a_next);
        state_[e].b_bw = std::move(b_next);
      }
    }
  }
  last_step_norm_ = std::sqrt(step_sq);
  ++round_;
}

std::vector<Message> Simulator::take_ledger() {
  std::vector<Message> out;
  out.swap(ledger_);
  return out;
}

SimulationResult simulate(const Network& net, const std::vector<DataSummand>& summands,
                          std::shared_ptr<const Regularizer> f, double eps, double lambda,
                          double rho, int max_iter, int probe_agent,
                          const CentralSolution& central, double stop_tol, int trace_stride,
                          std::optional<std::uint64_t> init_seed) {
  if (max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
  if (stop_tol < 0.0) throw std::invalid_argument("stop_tol must be nonnegative");
  if (trace_stride < 1) throw std::invalid_argument("trace stride must be at least 1");
  if (probe_agent < 1 || probe_agent > net.size())
    throw std::invalid_argument("probe agent " + std::to_string(probe_agent) + " outside 1.." +
                                std::to_string(net.size()));

  Simulator sim(net, make_node_locals(summands, net.size(), eps), std::move(f), lambda, rho);
  if (init_seed) sim.init_random(*init_seed);

  // Global data reassembled by the harness; agents never see it.
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(sim.n(), sim.p());
  Eigen::VectorXd y = Eigen::VectorXd::Zero(sim.n());
  for (const auto& s : summands) {
    X += s.X;
    y += s.y;
  }

  SimulationResult result;
  for (int k = 1; k <= max_iter; ++k) {
    const double prev_norm = sim.state_norm();
    sim.step();

    bool used_absolute = false;
    const double rel = relative_error(sim.beta_hat(probe_agent), central.beta, &used_absolute);
    if (used_absolute) result.trace.absolute_error = true;

    double consensus = 0.0;
    for (int i = 1; i <= net.size(); ++i)
      for (int j = i + 1; j <= net.size(); ++j)
        consensus = std::max(consensus, (sim.beta_hat(i) - sim.beta_hat(j)).norm());

    double feasibility = 0.0;
    for (int i = 1; i <= net.size(); ++i)
      feasibility = std::max(feasibility, (X * sim.beta_hat(i) - y).norm() - eps);
    feasibility = std::max(feasibility, 0.0);

    if ((k - 1) % trace_stride == 0)
      result.trace.rows.push_back({k, rel, consensus, feasibility, sim.last_step_norm()});
    result.iterations = k;
    if (stop_tol > 0.0 && sim.last_step_norm() <= stop_tol * (1.0 + prev_norm)) {
      result.converged = true;
      break;
    }
  }

  for (int i = 1; i <= net.size(); ++i) {
    result.beta_final.push_back(sim.beta_hat(i));
    result.alpha_final.push_back(sim.alpha_hat(i));
  }
  result.message_count = sim.message_count();
  result.ledger = sim.take_ledger();
  return result;
}

AuditReport audit_ledger(const std::vector<Message>& ledger, const Network& net,
                         Eigen::Index expect_a_dim, Eigen::Index expect_b_dim) {
  AuditReport report;
  report.total_messages = static_cast<long long>(ledger.size());
  if (!ledger.empty()) {
    if (expect_a_dim < 0) expect_a_dim = ledger.front().a.size();
    if (expect_b_dim < 0) expect_b_dim = ledger.front().b.size();
  }
  int max_round = -1;
  std::map<int, long long> per_round;
  for (std::size_t idx = 0; idx < ledger.size(); ++idx) {
    const Message& msg = ledger[idx];
    const std::string where = "message " + std::to_string(idx) + " (round " +
                              std::to_string(msg.round) + ", " + std::to_string(msg.sender) +
                              " -> " + std::to_string(msg.receiver) + ")";
    if (!net.has_edge(msg.sender, msg.receiver))
      report.violations.push_back(where + ": endpoints are not neighbors");
    if (msg.a.size() != expect_a_dim || msg.b.size() != expect_b_dim)
      report.violations.push_back(where + ": payload dimension " +
                                  std::to_string(msg.a.size() + msg.b.size()) + " instead of " +
                                  std::to_string(expect_a_dim + expect_b_dim));
    if (msg.round < 0)
      report.violations.push_back(where + ": negative round");
    else
      max_round = std::max(max_round, msg.round);
    per_round[msg.round] += 1;
  }
  report.rounds = max_round + 1;
  const auto per_round_expected = static_cast<long long>(2 * net.edges().size());
  for (int r = 0; r < report.rounds; ++r) {
    const auto it = per_round.find(r);
    const long long got = it == per_round.end() ? 0 : it->second;
    if (got != per_round_expected)
      report.violations.push_back("round " + std::to_string(r) + " carries " +
                                  std::to_string(got) + " messages instead of " +
                                  std::to_string(per_round_expected));
  }
  return report;
}

void write_trace_csv(const std::string& path, const RunTrace& trace) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write trace file '" + path + "'");
  out << "iter,rel_error,consensus_gap,feasibility_gap,step_norm\n";
  for (const TraceRow& row : trace.rows)
    out << row.iter << ',' << format_double(row.rel_error) << ','
        << format_double(row.consensus_gap) << ',' << format_double(row.feasibility_gap) << ','
        << format_double(row.step_norm) << '\n';
}

void write_ledger_file(const std::string& path, const Network& net, Eigen::Index n,
                       Eigen::Index p, const std::vector<Message>& ledger) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write ledger file '" + path + "'");
  out << "ledger\n";
  out << "n " << n << '\n';
  out << "p " << p << '\n';
  out << net.to_text();
  for (const Message& msg : ledger)
    out << "msg " << msg.round << ' ' << msg.sender << ' ' << msg.receiver << ' ' << msg.a.size()
        << ' ' << msg.b.size() << '\n';
}

LedgerFile read_ledger_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open ledger file '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != "ledger")
    throw DataError("'" + path + "' is not a ledger file");

  LedgerFile out;
  int m = 0;
  std::vector<std::pair<int, int>> edges;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    const std::string at = path + ":" + std::to_string(lineno);
    if (tag == "n") {
      if (!(ss >> out.n)) throw DataError(at + ": bad n");
    } else if (tag == "p") {
      if (!(ss >> out.p)) throw DataError(at + ": bad p");
    } else if (tag == "m") {
      if (!(ss >> m)) throw DataError(at + ": bad m");
    } else if (tag == "edge") {
      int i = 0, j = 0;
      if (!(ss >> i >> j)) throw DataError(at + ": bad edge");
      edges.emplace_back(i, j);
    } else if (tag == "msg") {
      Message msg;
      Eigen::Index adim = 0, bdim = 0;
      if (!(ss >> msg.round >> msg.sender >> msg.receiver >> adim >> bdim))
        throw DataError(at + ": bad message line");
      if (adim < 0 || bdim < 0) throw DataError(at + ": negative payload dimension");
      msg.a = Eigen::VectorXd::Zero(adim);
      msg.b = Eigen::VectorXd::Zero(bdim);
      out.messages.push_back(std::move(msg));
    } else {
      throw DataError(at + ": unknown tag '" + tag + "'");
    }
  }
  try {
    out.net = Network::from_edges(m, edges);
  } catch (const std::invalid_argument& e) {
    throw DataError("'" + path + "': invalid embedded network: " + e.what());
  }
  return out;
}

}  // namespace drnet
