#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cli/run_config.hpp"

namespace qres::cli {

inline constexpr const char* kToolVersion = "0.1.0";

struct ManifestFile {
  std::string path;  // relative to the run directory
  std::string sha256;
  std::uintmax_t bytes = 0;
};

/// manifest.json, written last in the run directory:
///
///   { "run_id", "subcommand", "tool_version", "seed",
///     "started_at", "finished_at",            (UTC, ISO 8601)
///     "config": { key: value, ... },          (snapshot(), all strings)
///     "files": [ { "path", "sha256", "bytes" }, ... ],
///     "failures": [ "...", ... ] }            (sweep-qubits only)
struct RunManifest {
  std::string run_id;
  std::string subcommand;
  std::string tool_version = kToolVersion;
  std::uint64_t seed = 0;
  std::string started_at;
  std::string finished_at;
  KeyValues config;
  std::vector<ManifestFile> files;
  std::vector<std::string> failures;
};

std::string utc_timestamp();

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// Hashes each listed file (relative to run_dir) and writes
/// run_dir/manifest.json.
void write_manifest(const std::filesystem::path& run_dir, RunManifest manifest,
                    const std::vector<std::string>& files);

RunManifest read_manifest(const std::filesystem::path& manifest_path);

/// Checks that every listed file exists and matches its checksum. Returns
/// the problems found; empty means the manifest verifies.
std::vector<std::string> verify_manifest(const std::filesystem::path& manifest_path);

}  // namespace qres::cli
