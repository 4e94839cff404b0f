#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "drnet/config.hpp"
#include "drnet/csv.hpp"
#include "drnet/errors.hpp"

using namespace drnet;

namespace {

const char* kBaseConfig =
    "data = generate\n"
    "n = 20\n"
    "p = 40\n"
    "data_seed = 1\n"
    "split = arbitrary-overlapping\n"
    "split_seed = 2\n"
    "network = random-walk\n"
    "m = 6\n"
    "network_seed = 3\n"
    "f = l1\n"
    "eps = 0.01\n"
    "lambda = 0.02\n"
    "rho = 1.9\n"
    "max_iter = 100\n"
    "output = out_test\n";

ExperimentConfig parse_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "test.cfg");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& name) : path(std::filesystem::temp_directory_path() / name) {
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("a full experiment config parses with defaults applied") {
  const ExperimentConfig cfg = parse_string(kBaseConfig);
  CHECK(cfg.data_source == DataSource::Generate);
  CHECK(cfg.n == 20);
  CHECK(cfg.p == 40);
  CHECK(cfg.scheme == SplitScheme::ArbitraryOverlapping);
  CHECK(cfg.m == 6);
  CHECK(cfg.f_name == "l1");
  CHECK(cfg.rho == 1.9);
  CHECK(cfg.stride == 1);
  CHECK(cfg.probe == 1);
  CHECK(cfg.stop_tol == 0.0);
}

TEST_CASE("comments and blank lines are ignored") {
  const ExperimentConfig cfg = parse_string(std::string("# header\n\n") + kBaseConfig +
                                            "stride = 4  # every 4th row\n");
  CHECK(cfg.stride == 4);
}

TEST_CASE("rho on the boundary is rejected with the key name") {
  std::string text = kBaseConfig;
  const auto at = text.find("rho = 1.9");
  text.replace(at, 9, "rho = 2.0");
  try {
    parse_string(text);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("'rho'") != std::string::npos);
    CHECK(std::string(e.what()).find("test.cfg:13") != std::string::npos);
  }
}

TEST_CASE("an empty config lists every missing required key") {
  try {
    parse_string("");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    for (const char* key : {"'data'", "'split'", "'network'", "'f'", "'eps'", "'lambda'",
                            "'rho'", "'max_iter'", "'output'"})
      CHECK(msg.find(key) != std::string::npos);
  }
}

TEST_CASE("unknown regularizer names are rejected at the f key") {
  std::string text = kBaseConfig;
  const auto at = text.find("f = l1");
  text.replace(at, 6, "f = l7");
  try {
    parse_string(text);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("'f'") != std::string::npos);
    CHECK(std::string(e.what()).find("l7") != std::string::npos);
  }
}

TEST_CASE("unknown and duplicate keys are rejected") {
  CHECK_THROWS_WITH_AS(parse_string(std::string(kBaseConfig) + "bogus = 1\n"),
                       doctest::Contains("unknown key 'bogus'"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_string(std::string(kBaseConfig) + "rho = 1.0\n"),
                       doctest::Contains("duplicate key 'rho'"), ConfigError);
}

TEST_CASE("file-based modes demand their path keys") {
  CHECK_THROWS_WITH_AS(parse_string("data = files\nsplit = rows\nnetwork = random-walk\nm = 2\n"
                                    "network_seed = 0\nf = l1\neps = 1\nlambda = 1\nrho = 1\n"
                                    "max_iter = 10\noutput = o\n"),
                       doctest::Contains("'x_path'"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.cfg"), ConfigError);
}

TEST_CASE("run_experiment writes deterministic outputs end to end") {
  TempDir dir("drnet_cfg_run");
  ExperimentConfig cfg = parse_string(kBaseConfig);
  cfg.n = 6;
  cfg.p = 5;
  cfg.m = 3;
  cfg.eps = 0.2;
  cfg.lambda = 0.2;
  cfg.rho = 1.5;
  cfg.max_iter = 60;

  cfg.output = (dir.path / "a").string();
  REQUIRE(run_experiment(cfg) == 0);
  cfg.output = (dir.path / "b").string();
  REQUIRE(run_experiment(cfg) == 0);

  for (const char* name : {"trace.csv", "agents_beta.csv", "central_beta.csv", "ledger.txt"}) {
    const std::string a = read_file(dir.path / "a" / name);
    const std::string b = read_file(dir.path / "b" / name);
    CHECK(a == b);
    CHECK_FALSE(a.empty());
  }

  // 60 iterations at stride 1: header + 60 rows.
  std::istringstream trace(read_file(dir.path / "a" / "trace.csv"));
  int lines = 0;
  std::string line;
  while (std::getline(trace, line))
    if (!line.empty()) ++lines;
  CHECK(lines == 61);
}

TEST_CASE("files mode reproduces the solvable-by-hand instance") {
  TempDir dir("drnet_cfg_files");
  Eigen::MatrixXd X = Eigen::MatrixXd::Identity(2, 2);
  Eigen::VectorXd y(2);
  y << 2.0, 0.0;
  write_csv_matrix((dir.path / "x.csv").string(), X);
  write_csv_vector((dir.path / "y.csv").string(), y);

  ExperimentConfig cfg;
  cfg.data_source = DataSource::Files;
  cfg.x_path = (dir.path / "x.csv").string();
  cfg.y_path = (dir.path / "y.csv").string();
  cfg.split_source = SplitSource::Preset;
  cfg.scheme = SplitScheme::Rows;
  cfg.network_source = NetworkSource::RandomWalk;
  cfg.m = 2;
  cfg.network_seed = 0;
  cfg.f_name = "l1";
  cfg.eps = 0.5;
  cfg.lambda = 0.4;
  cfg.rho = 1.5;
  cfg.max_iter = 30000;
  cfg.stop_tol = 1e-13;
  cfg.output = (dir.path / "out").string();
  REQUIRE(run_experiment(cfg) == 0);

  const Eigen::MatrixXd agents = read_csv_matrix((dir.path / "out" / "agents_beta.csv").string());
  REQUIRE(agents.rows() == 2);
  for (int i = 0; i < 2; ++i) {
    CHECK(agents(i, 0) == doctest::Approx(1.5).epsilon(1e-5));
    CHECK(std::abs(agents(i, 1)) <= 1e-5);
  }

  cfg.x_path = "/nonexistent/x.csv";
  CHECK_THROWS_AS(run_experiment(cfg), DataError);
}
