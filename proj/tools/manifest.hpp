#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace subflow::cli {

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// Run record written next to the primary output as <out>.manifest.json.
struct Manifest {
  std::string subcommand;
  nlohmann::json config = nlohmann::json::object();
  nlohmann::json inputs = nlohmann::json::object();
  std::vector<std::filesystem::path> outputs;
  nlohmann::json report = nlohmann::json::object();

  void write(const std::filesystem::path& path) const;
};

std::filesystem::path manifest_path(const std::filesystem::path& out);

}  // namespace subflow::cli
