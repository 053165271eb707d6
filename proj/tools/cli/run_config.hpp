#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "qres/circuit.hpp"
#include "qres/datagen.hpp"
#include "qres/diagnostics.hpp"
#include "qres/spectral.hpp"
#include "qres/training.hpp"

namespace qres::cli {

using KeyValues = std::map<std::string, std::string>;

/// Everything a subcommand needs. Populated from a flat key/value document
/// (see config_keys()) with command-line flags of the same name on top.
struct RunConfig {
  std::string run_id = "run";
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 0;       // training / probe randomness
  std::uint64_t data_seed = 0;  // dataset draws and split
  unsigned threads = 1;
  std::string data_file;        // empty: generate from the dataset keys

  DatasetSpec dataset;
  CircuitConfig circuit;
  TrainConfig train;
  std::size_t grid_points = 2000;
  BarrenConfig barren;
  std::vector<int> sweep_qubits{2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<std::uint64_t> sweep_seeds{0, 1, 2};

  std::filesystem::path run_dir() const { return output_dir / run_id; }
  GridSpec grid() const { return {dataset.x_min, dataset.x_max, grid_points}; }
};

struct ConfigKey {
  std::string name;
  std::string help;
};

/// Every accepted key, in snapshot order.
const std::vector<ConfigKey>& config_keys();

/// Applies the pairs onto the defaults. Unknown keys, malformed values and
/// out-of-range settings throw ConfigError naming the key.
RunConfig make_run_config(const KeyValues& values);

/// Full key/value snapshot; make_run_config(snapshot(c)) reproduces c.
KeyValues snapshot(const RunConfig& config);

/// Reads "key = value" lines ('#' starts a comment). A .json file is read
/// as a run manifest and its "config" object is used.
KeyValues load_config_file(const std::filesystem::path& path);

/// "2-10", "0,1,2", "2-4,8".
std::vector<int> parse_int_list(const std::string& text);
std::string format_int_list(const std::vector<int>& values);

}  // namespace qres::cli
