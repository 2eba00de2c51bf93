#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "superrad/model.hpp"

namespace superrad::io {

struct RunManifest {
  std::string config_hash;
  std::string command;
  std::string tool_version;
  std::string canonical_config;
  std::vector<std::string> outputs;
  /// Free-form results, kept in insertion order.
  std::vector<std::pair<std::string, std::string>> summary;
  std::string started;   // ISO 8601 UTC
  std::string finished;  // ISO 8601 UTC
};

RunManifest make_manifest(const model::SystemConfig& cfg, std::string command);

std::string utc_timestamp();

/// run_manifest.json holds everything except timestamps, so identical runs
/// give identical bytes. Timestamps go to run_timestamps.json.
void write_manifest(const RunManifest& manifest, const std::filesystem::path& dir);

std::string manifest_json(const RunManifest& manifest);

}  // namespace superrad::io
