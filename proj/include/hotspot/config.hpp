#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "hotspot/bench.hpp"
#include "hotspot/validity.hpp"

namespace hotspot {

// Everything a CLI run needs. Defaults reproduce the original study's
// parameter choices.
struct RunConfig {
  std::string input;
  std::string lat_col = "Latitude";
  std::string lon_col = "Longitude";
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool dedupe = false;

  std::vector<std::string> algorithms = {"kmeans", "minibatch_kmeans", "dbscan", "optics"};
  int k = 10;
  std::string init = "random";  // random | kmeanspp
  int max_iter = 300;
  double tol_km = 0.1;
  int minibatch_k = 10;
  std::size_t batch_size = 100;
  int n_iter = 100;
  double eps_km = 5.0;
  std::size_t min_samples = 300;
  double optics_max_eps_km = kUnreachable;
  double optics_cut_eps_km = 5.0;
  unsigned threads = 1;

  bool exclude_noise = true;
  std::string db_combine = "mean";  // mean | half-sum

  std::vector<std::size_t> sizes = {10000, 21854, 33707};
  int repetitions = 3;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Config keys, in file order. CLI flags use the same names with '-' for '_'.
const std::vector<std::string>& config_keys();

// Throws InvalidArgument for unknown keys or unparseable values.
void set_config_value(RunConfig& config, const std::string& key, const std::string& value);
std::string get_config_value(const RunConfig& config, const std::string& key);

// Flat "key = value" text, one per line; '#' starts a comment.
std::string to_config_text(const RunConfig& config);
void apply_config_text(RunConfig& config, const std::string& text);
RunConfig load_config_file(const std::filesystem::path& path);

// Typed parameter blocks; throw InvalidArgument on invalid values.
AlgorithmSpec algorithm_spec(const RunConfig& config, Algorithm algorithm);
ValidityOptions validity_options(const RunConfig& config);

}  // namespace hotspot
