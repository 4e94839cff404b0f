// drnet command line: runs experiments from config files, solves the
// centralized reference problem, generates random networks, and audits
// message ledgers. Exit codes: 0 success, 1 audit violations, 2 bad
// configuration or usage, 3 bad data, 4 central solver non-convergence.

#include <CLI11.hpp>
#include <iostream>

#include "drnet/config.hpp"
#include "drnet/errors.hpp"
#include "drnet/simnet.hpp"
#include "drnet/topology.hpp"

namespace {

int cmd_audit(const std::string& ledger_path) {
  const drnet::LedgerFile file = drnet::read_ledger_file(ledger_path);
  const drnet::AuditReport report =
      drnet::audit_ledger(file.messages, file.net, file.n, file.p);
  for (const std::string& violation : report.violations) std::cout << "violation: " << violation << '\n';
  std::cout << "audit messages=" << report.total_messages << " rounds=" << report.rounds
            << " edges=" << file.net.edges().size() << " violations=" << report.violations.size()
            << '\n';
  return report.clean() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"in-network constrained regression over additively split data"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "run the distributed experiment from a config file");
  run->add_option("config", config_path, "config file")->required();

  std::string central_config_path;
  auto* central = app.add_subcommand("central", "solve the centralized reference problem only");
  central->add_option("config", central_config_path, "config file")->required();

  int gen_m = 0;
  std::uint64_t gen_seed = 0;
  auto* gen = app.add_subcommand("gen-network", "generate a random connected network");
  gen->add_option("m", gen_m, "number of nodes (>= 2)")->required();
  gen->add_option("seed", gen_seed, "random seed")->required();

  std::string ledger_path;
  auto* audit = app.add_subcommand("audit", "audit a message ledger file");
  audit->add_option("ledger", ledger_path, "ledger file written by 'run'")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) return drnet::run_experiment(drnet::load_config(config_path));
    if (*central) return drnet::run_central_only(drnet::load_config(central_config_path));
    if (*gen) {
      std::cout << drnet::random_walk_network(gen_m, gen_seed).to_text();
      return 0;
    }
    if (*audit) return cmd_audit(ledger_path);
  } catch (const drnet::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const drnet::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
