#include "superrad/io/manifest.hpp"

#include <chrono>
#include <ctime>

#include <json.hpp>

#include "superrad/io/config.hpp"
#include "superrad/io/csv.hpp"

namespace superrad::io {

RunManifest make_manifest(const model::SystemConfig& cfg, std::string command) {
  RunManifest m;
  m.config_hash = config_hash(cfg);
  m.canonical_config = canonical_form(cfg);
  m.command = std::move(command);
  m.tool_version = SUPERRAD_VERSION;
  m.started = utc_timestamp();
  return m;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string manifest_json(const RunManifest& manifest) {
  nlohmann::ordered_json j;
  j["tool_version"] = manifest.tool_version;
  j["command"] = manifest.command;
  j["config_hash"] = manifest.config_hash;
  j["config"] = manifest.canonical_config;
  j["outputs"] = manifest.outputs;
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  for (const auto& [k, v] : manifest.summary) summary[k] = v;
  j["summary"] = summary;
  return j.dump(2) + "\n";
}

void write_manifest(const RunManifest& manifest, const std::filesystem::path& dir) {
  write_text(dir / "run_manifest.json", manifest_json(manifest));
  nlohmann::ordered_json t;
  t["config_hash"] = manifest.config_hash;
  t["started"] = manifest.started;
  t["finished"] = manifest.finished;
  write_text(dir / "run_timestamps.json", t.dump(2) + "\n");
}

}  // namespace superrad::io
