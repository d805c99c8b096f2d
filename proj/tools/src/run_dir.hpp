#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace nanotalbot::cli {

struct OutputRecord {
  std::string file;
  std::string checksum;  ///< fnv1a-64 of the bytes written
  std::size_t bytes = 0;
};

/// runs/<UTC timestamp>-<config hash>/ plus the manifest that describes it.
class RunDirectory {
 public:
  RunDirectory(const std::filesystem::path& root, const std::string& command,
               const std::vector<std::string>& config_paths, const std::string& config_hash,
               std::uint64_t seed);

  const std::filesystem::path& path() const { return dir_; }
  const std::vector<OutputRecord>& outputs() const { return outputs_; }

  void write(const std::string& name, const std::string& content);
  /// Writes manifest.json; call once, after all outputs.
  void finish();

 private:
  std::filesystem::path dir_;
  std::string command_;
  std::vector<std::string> configs_;
  std::string config_hash_;
  std::string timestamp_;
  std::uint64_t seed_;
  std::vector<OutputRecord> outputs_;
};

std::string tool_version();

}  // namespace nanotalbot::cli
