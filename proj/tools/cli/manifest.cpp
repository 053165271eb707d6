#include "cli/manifest.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <ctime>
#include <fstream>
#include <memory>

#include "json.hpp"
#include "qres/errors.hpp"

namespace qres::cli {

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());

  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 initialization failed");
  }
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof(buf));
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);

  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

void write_manifest(const std::filesystem::path& run_dir, RunManifest manifest,
                    const std::vector<std::string>& files) {
  manifest.files.clear();
  for (const auto& f : files) {
    const auto full = run_dir / f;
    manifest.files.push_back({f, sha256_file(full), std::filesystem::file_size(full)});
  }
  if (manifest.finished_at.empty()) manifest.finished_at = utc_timestamp();

  nlohmann::ordered_json doc;
  doc["run_id"] = manifest.run_id;
  doc["subcommand"] = manifest.subcommand;
  doc["tool_version"] = manifest.tool_version;
  doc["seed"] = manifest.seed;
  doc["started_at"] = manifest.started_at;
  doc["finished_at"] = manifest.finished_at;
  doc["config"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : manifest.config) doc["config"][k] = v;
  doc["files"] = nlohmann::ordered_json::array();
  for (const auto& f : manifest.files) {
    doc["files"].push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  }
  doc["failures"] = manifest.failures;

  std::ofstream out(run_dir / "manifest.json");
  out << doc.dump(2) << '\n';
  if (!out) throw Error("cannot write manifest in " + run_dir.string());
}

RunManifest read_manifest(const std::filesystem::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw Error("cannot open manifest " + manifest_path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
    RunManifest m;
    m.run_id = doc.at("run_id").get<std::string>();
    m.subcommand = doc.at("subcommand").get<std::string>();
    m.tool_version = doc.at("tool_version").get<std::string>();
    m.seed = doc.at("seed").get<std::uint64_t>();
    m.started_at = doc.at("started_at").get<std::string>();
    m.finished_at = doc.at("finished_at").get<std::string>();
    m.config = doc.at("config").get<KeyValues>();
    for (const auto& f : doc.at("files")) {
      m.files.push_back({f.at("path").get<std::string>(), f.at("sha256").get<std::string>(),
                         f.at("bytes").get<std::uintmax_t>()});
    }
    m.failures = doc.value("failures", std::vector<std::string>{});
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error("malformed manifest " + manifest_path.string() + ": " + e.what());
  }
}

std::vector<std::string> verify_manifest(const std::filesystem::path& manifest_path) {
  const RunManifest m = read_manifest(manifest_path);
  const auto dir = manifest_path.parent_path();
  std::vector<std::string> problems;
  for (const auto& f : m.files) {
    const auto full = dir / f.path;
    if (!std::filesystem::exists(full)) {
      problems.push_back("missing file " + f.path);
      continue;
    }
    if (sha256_file(full) != f.sha256) problems.push_back("checksum mismatch for " + f.path);
  }
  return problems;
}

}  // namespace qres::cli
