#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "drnet/central.hpp"
#include "drnet/datasplit.hpp"
#include "drnet/prox.hpp"
#include "drnet/regression.hpp"
#include "drnet/topology.hpp"

namespace drnet {

/// One payload exchanged in a synchronous round. Payload vectors are
/// deep copies; nothing in a Message can alias an agent's private data.
struct Message {
  int round = 0;  // iterate index k carried by the payload
  int sender = 0;
  int receiver = 0;
  Eigen::VectorXd a;
  Eigen::VectorXd b;
};

struct TraceRow {
  int iter = 0;
  double rel_error = 0.0;
  double consensus_gap = 0.0;
  double feasibility_gap = 0.0;
  double step_norm = 0.0;
};

struct RunTrace {
  std::vector<TraceRow> rows;
  /// Set when the reference solution has zero norm and rel_error holds the
  /// absolute error instead.
  bool absolute_error = false;
};

/// ||estimate - reference|| / ||reference||, falling back to the absolute
/// error (and setting *used_absolute) when ||reference|| == 0.
double relative_error(const Eigen::VectorXd& estimate, const Eigen::VectorXd& reference,
                      bool* used_absolute = nullptr);

/// Synchronous message-passing execution of the distributed regression
/// recursion. Each round delivers every edge's current (a, b) pair in both
/// directions, then every agent computes its edge proxes, solves its node
/// subproblem, and updates its outgoing variables; all reads come from the
/// delivered payloads, so the rounds are globally synchronous. Single
/// threaded and deterministic.
class Simulator {
 public:
  Simulator(const Network& net, std::vector<NodeLocal> locals,
            std::shared_ptr<const Regularizer> f, double lambda, double rho);

  /// Re-initializes all edge variables (zeros by default at construction).
  void init_zeros();
  void init_random(std::uint64_t seed);

  void step();
  int round() const { return round_; }

  const Eigen::VectorXd& a(int i, int j) const;  // current a_ij
  const Eigen::VectorXd& b(int i, int j) const;  // current b_ij
  const Eigen::VectorXd& beta_hat(int node) const;
  const Eigen::VectorXd& alpha_hat(int node) const;

  double last_step_norm() const { return last_step_norm_; }
  double state_norm() const;

  const Network& network() const { return net_; }
  const std::vector<NodeLocal>& locals() const { return locals_; }
  Eigen::Index n() const { return n_; }
  Eigen::Index p() const { return p_; }

  /// Every message delivered so far (recording can be disabled for long
  /// runs; the count keeps accumulating either way).
  const std::vector<Message>& ledger() const { return ledger_; }
  std::vector<Message> take_ledger();
  void set_ledger_recording(bool on) { record_ledger_ = on; }
  long long message_count() const { return message_count_; }

 private:
  struct EdgeVars {
    Eigen::VectorXd a_fw, b_fw;  // direction low -> high label
    Eigen::VectorXd a_bw, b_bw;  // direction high -> low label
  };

  const Eigen::VectorXd& dir_a(const std::vector<EdgeVars>& s, int i, int j) const;
  const Eigen::VectorXd& dir_b(const std::vector<EdgeVars>& s, int i, int j) const;

  Network net_;
  std::vector<NodeLocal> locals_;
  std::shared_ptr<const Regularizer> f_;
  double lambda_;
  double rho_;
  Eigen::Index n_ = 0, p_ = 0;

  std::vector<EdgeVars> state_;
  std::vector<Eigen::VectorXd> beta_hat_;
  std::vector<Eigen::VectorXd> alpha_hat_;
  int round_ = 0;
  double last_step_norm_ = 0.0;

  std::vector<Message> ledger_;
  bool record_ledger_ = true;
  long long message_count_ = 0;
};

struct SimulationResult {
  RunTrace trace;
  std::vector<Eigen::VectorXd> beta_final;   // per agent
  std::vector<Eigen::VectorXd> alpha_final;  // per agent
  std::vector<Message> ledger;
  int iterations = 0;
  long long message_count = 0;
  bool converged = false;  // stop_tol reached before max_iter
};

/// Runs the simulator for up to max_iter rounds (stopping early when
/// ||z_{k+1} - z_k|| <= stop_tol * (1 + ||z_k||), if stop_tol > 0) and
/// collects per-iteration metrics against the centrally computed
/// reference: relative error of the probe agent's estimate, the maximum
/// pairwise estimate gap, and the worst constraint violation measured with
/// the reassembled global data. Rows are recorded every trace_stride
/// iterations. init_seed switches from all-zero to seeded random
/// initialization.
SimulationResult simulate(const Network& net, const std::vector<DataSummand>& summands,
                          std::shared_ptr<const Regularizer> f, double eps, double lambda,
                          double rho, int max_iter, int probe_agent,
                          const CentralSolution& central, double stop_tol = 0.0,
                          int trace_stride = 1,
                          std::optional<std::uint64_t> init_seed = std::nullopt);

struct AuditReport {
  long long total_messages = 0;
  int rounds = 0;  // distinct round indices observed
  std::vector<std::string> violations;
  bool clean() const { return violations.empty(); }
};

/// Checks that every message travels along a network edge and has the
/// expected payload dimensions, and that every observed round carries
/// exactly two messages per edge. Dimensions default to those of the first
/// message when not given.
AuditReport audit_ledger(const std::vector<Message>& ledger, const Network& net,
                         Eigen::Index expect_a_dim = -1, Eigen::Index expect_b_dim = -1);

/// Trace CSV: header "iter,rel_error,consensus_gap,feasibility_gap,step_norm".
void write_trace_csv(const std::string& path, const RunTrace& trace);

/// Self-contained ledger file: the network, payload dimensions, and one
/// line per message (endpoints and payload sizes; values are not needed
/// for auditing).
void write_ledger_file(const std::string& path, const Network& net, Eigen::Index n,
                       Eigen::Index p, const std::vector<Message>& ledger);

struct LedgerFile {
  Network net;
  Eigen::Index n = 0, p = 0;
  std::vector<Message> messages;  // payloads are zero vectors of the recorded sizes
};

LedgerFile read_ledger_file(const std::string& path);  // throws DataError

}  // namespace drnet
