#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace tagsim {

/// Hex SHA-256 digests. File variant throws IoError if unreadable.
std::string sha256_bytes(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

/// Run manifest written next to every output. Contains no wall-clock or
/// host-specific values, so identical inputs and configs produce identical
/// manifests (and the manifest certifies identical outputs).
struct Manifest {
  std::string command;        // "simulate" | "analyze"
  nlohmann::json config;      // fully resolved, defaults materialized
  std::vector<std::pair<std::string, std::string>> inputs;  // (name, sha256)
  nlohmann::json data;        // data-derived facts (time range, counts)

  nlohmann::json to_json() const;
  void write(const std::filesystem::path& path) const;
};

}  // namespace tagsim
