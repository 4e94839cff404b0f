#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "drnet/datasplit.hpp"

namespace drnet {

enum class DataSource { Generate, Files };
enum class NetworkSource { RandomWalk, File };
enum class SplitSource { Preset, MaskFile };

/// One experiment, parsed from a flat "key = value" file ('#' starts a
/// comment). All randomness flows from the three named seeds.
struct ExperimentConfig {
  DataSource data_source = DataSource::Generate;
  int n = 0;
  int p = 0;
  std::uint64_t data_seed = 0;
  std::string x_path;
  std::string y_path;

  SplitSource split_source = SplitSource::Preset;
  SplitScheme scheme = SplitScheme::Rows;
  std::uint64_t split_seed = 0;
  std::string mask_path;

  NetworkSource network_source = NetworkSource::RandomWalk;
  int m = 0;
  std::uint64_t network_seed = 0;
  std::string network_path;

  std::string f_name;
  double eps = 0.0;
  double lambda = 0.0;
  double rho = 0.0;
  int max_iter = 0;
  double stop_tol = 0.0;
  int probe = 1;
  std::string output;
  int stride = 1;
};

/// Parses and validates a config file. Throws ConfigError with the key
/// name (and line number, where one exists) on missing keys, unknown keys,
/// out-of-range values, or unknown regularizer names.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(std::istream& in, const std::string& source);

/// Runs the full experiment: data, split, network, central reference,
/// simulation, and output files (trace.csv, agents_beta.csv,
/// central_beta.csv, ledger.txt under the configured output directory),
/// plus a one-line summary on stdout. Returns 0 on success or 4 when the
/// central solver fails to converge; file and data problems surface as
/// DataError.
int run_experiment(const ExperimentConfig& cfg);

/// The "central" subcommand: reference solve only; writes central_beta.csv.
int run_central_only(const ExperimentConfig& cfg);

}  // namespace drnet
