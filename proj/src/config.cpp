#include "drnet/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "drnet/errors.hpp"
#include "drnet/prox.hpp"

namespace drnet {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

struct RawEntry {
  std::string value;
  int line = 0;
};

class KeyTable {
 public:
  KeyTable(std::istream& in, std::string source) : source_(std::move(source)) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const std::size_t hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      const std::size_t eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigError(at(lineno) + ": expected 'key = value', got '" + line + "'");
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key.empty()) throw ConfigError(at(lineno) + ": empty key");
      if (entries_.count(key))
        throw ConfigError(at(lineno) + ": duplicate key '" + key + "' (first on line " +
                          std::to_string(entries_[key].line) + ")");
      entries_[key] = {value, lineno};
    }
  }

  std::string at(int lineno) const { return source_ + ":" + std::to_string(lineno); }

  bool has(const std::string& key) const { return entries_.count(key) > 0; }

  const RawEntry& raw(const std::string& key) {
    used_.insert(key);
    return entries_.at(key);
  }

  std::string where(const std::string& key) { return at(entries_.at(key).line); }

  void require(const std::vector<std::string>& keys) const {
    std::string missing;
    for (const auto& key : keys)
      if (!entries_.count(key)) missing += missing.empty() ? "'" + key + "'" : ", '" + key + "'";
    if (!missing.empty())
      throw ConfigError(source_ + ": missing required key(s): " + missing);
  }

  void reject_unknown() const {
    for (const auto& [key, entry] : entries_)
      if (!used_.count(key))
        throw ConfigError(at(entry.line) + ": unknown key '" + key + "'");
  }

  std::string get_string(const std::string& key) { return raw(key).value; }

  long long get_int(const std::string& key) {
    const RawEntry& entry = raw(key);
    try {
      std::size_t pos = 0;
      const long long v = std::stoll(entry.value, &pos);
      if (pos != entry.value.size()) throw std::invalid_argument(entry.value);
      return v;
    } catch (const std::exception&) {
      throw ConfigError(at(entry.line) + ": key '" + key + "' must be an integer, got '" +
                        entry.value + "'");
    }
  }

  std::uint64_t get_seed(const std::string& key) {
    const RawEntry& entry = raw(key);
    try {
      std::size_t pos = 0;
      const unsigned long long v = std::stoull(entry.value, &pos);
      if (pos != entry.value.size()) throw std::invalid_argument(entry.value);
      return v;
    } catch (const std::exception&) {
      throw ConfigError(at(entry.line) + ": key '" + key + "' must be a nonnegative integer, got '" +
                        entry.value + "'");
    }
  }

  double get_double(const std::string& key) {
    const RawEntry& entry = raw(key);
    try {
      std::size_t pos = 0;
      const double v = std::stod(entry.value, &pos);
      if (pos != entry.value.size()) throw std::invalid_argument(entry.value);
      return v;
    } catch (const std::exception&) {
      throw ConfigError(at(entry.line) + ": key '" + key + "' must be a number, got '" +
                        entry.value + "'");
    }
  }

 private:
  std::string source_;
  std::map<std::string, RawEntry> entries_;
  std::set<std::string> used_;
};

}  // namespace

ExperimentConfig parse_config(std::istream& in, const std::string& source) {
  KeyTable table(in, source);
  table.require({"data", "split", "network", "f", "eps", "lambda", "rho", "max_iter", "output"});

  ExperimentConfig cfg;

  const std::string data_mode = table.get_string("data");
  if (data_mode == "generate") {
    cfg.data_source = DataSource::Generate;
    table.require({"n", "p", "data_seed"});
    cfg.n = static_cast<int>(table.get_int("n"));
    cfg.p = static_cast<int>(table.get_int("p"));
    cfg.data_seed = table.get_seed("data_seed");
    if (cfg.n < 1) throw ConfigError(table.where("n") + ": key 'n' must be at least 1");
    if (cfg.p < 1) throw ConfigError(table.where("p") + ": key 'p' must be at least 1");
  } else if (data_mode == "files") {
    cfg.data_source = DataSource::Files;
    table.require({"x_path", "y_path"});
    cfg.x_path = table.get_string("x_path");
    cfg.y_path = table.get_string("y_path");
  } else {
    throw ConfigError(table.where("data") + ": key 'data' must be 'generate' or 'files', got '" +
                      data_mode + "'");
  }

  const std::string split_mode = table.get_string("split");
  if (split_mode == "masks") {
    cfg.split_source = SplitSource::MaskFile;
    table.require({"mask_path"});
    cfg.mask_path = table.get_string("mask_path");
  } else {
    cfg.split_source = SplitSource::Preset;
    try {
      cfg.scheme = split_scheme_from_name(split_mode);
    } catch (const DataError&) {
      throw ConfigError(table.where("split") + ": key 'split' must be columns, rows, blocks, "
                        "arbitrary-overlapping, or masks; got '" + split_mode + "'");
    }
    if (cfg.scheme == SplitScheme::ArbitraryOverlapping) {
      table.require({"split_seed"});
      cfg.split_seed = table.get_seed("split_seed");
    } else if (table.has("split_seed")) {
      cfg.split_seed = table.get_seed("split_seed");
    }
  }

  const std::string network_mode = table.get_string("network");
  if (network_mode == "random-walk") {
    cfg.network_source = NetworkSource::RandomWalk;
    table.require({"m", "network_seed"});
    cfg.m = static_cast<int>(table.get_int("m"));
    cfg.network_seed = table.get_seed("network_seed");
    if (cfg.m < 2) throw ConfigError(table.where("m") + ": key 'm' must be at least 2");
  } else if (network_mode == "file") {
    cfg.network_source = NetworkSource::File;
    table.require({"network_path"});
    cfg.network_path = table.get_string("network_path");
  } else {
    throw ConfigError(table.where("network") + ": key 'network' must be 'random-walk' or 'file', got '" +
                      network_mode + "'");
  }

  cfg.f_name = table.get_string("f");
  try {
    make_regularizer(cfg.f_name);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(table.where("f") + ": key 'f': " + e.what());
  }

  cfg.eps = table.get_double("eps");
  if (!(cfg.eps > 0.0)) throw ConfigError(table.where("eps") + ": key 'eps' must be positive");
  cfg.lambda = table.get_double("lambda");
  if (!(cfg.lambda > 0.0)) throw ConfigError(table.where("lambda") + ": key 'lambda' must be positive");
  cfg.rho = table.get_double("rho");
  if (!(cfg.rho > 0.0 && cfg.rho < 2.0))
    throw ConfigError(table.where("rho") + ": key 'rho' must lie strictly inside (0, 2)");
  cfg.max_iter = static_cast<int>(table.get_int("max_iter"));
  if (cfg.max_iter < 1) throw ConfigError(table.where("max_iter") + ": key 'max_iter' must be at least 1");

  cfg.output = table.get_string("output");
  if (cfg.output.empty()) throw ConfigError(table.where("output") + ": key 'output' must not be empty");

  if (table.has("stop_tol")) {
    cfg.stop_tol = table.get_double("stop_tol");
    if (cfg.stop_tol < 0.0)
      throw ConfigError(table.where("stop_tol") + ": key 'stop_tol' must be nonnegative");
  }
  if (table.has("probe")) {
    cfg.probe = static_cast<int>(table.get_int("probe"));
    if (cfg.probe < 1) throw ConfigError(table.where("probe") + ": key 'probe' must be at least 1");
  }
  if (table.has("stride")) {
    cfg.stride = static_cast<int>(table.get_int("stride"));
    if (cfg.stride < 1) throw ConfigError(table.where("stride") + ": key 'stride' must be at least 1");
  }

  table.reject_unknown();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, path);
}

}  // namespace drnet
