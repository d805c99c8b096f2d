#include "run_dir.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <json.hpp>
#include <stdexcept>

#include "nanotalbot/serialize.hpp"

#ifndef NANOTALBOT_VERSION
#define NANOTALBOT_VERSION "0.0.0"
#endif

namespace nanotalbot::cli {

namespace fs = std::filesystem;

std::string tool_version() { return NANOTALBOT_VERSION; }

namespace {

std::string utc_stamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

}  // namespace

RunDirectory::RunDirectory(const fs::path& root, const std::string& command,
                           const std::vector<std::string>& config_paths,
                           const std::string& config_hash, std::uint64_t seed)
    : command_(command), configs_(config_paths), config_hash_(config_hash),
      timestamp_(utc_stamp()), seed_(seed) {
  const std::string base = timestamp_ + "-" + config_hash_;
  dir_ = root / base;
  // same config re-run within one second
  for (int k = 2; fs::exists(dir_); ++k) dir_ = root / (base + "-" + std::to_string(k));
  fs::create_directories(dir_);
}

void RunDirectory::write(const std::string& name, const std::string& content) {
  const fs::path p = dir_ / name;
  std::ofstream out(p, std::ios::binary);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("failed to write " + p.string());
  outputs_.push_back({name, fnv1a_hex(content), content.size()});
}

void RunDirectory::finish() {
  nlohmann::ordered_json j;
  j["tool"] = "nanotalbot";
  j["version"] = tool_version();
  j["command"] = command_;
  j["timestamp_utc"] = timestamp_;
  j["config_files"] = configs_;
  j["config_hash"] = config_hash_;
  j["seed"] = seed_;
  j["checksum_algorithm"] = "fnv1a-64";
  j["outputs"] = nlohmann::ordered_json::array();
  for (const auto& o : outputs_)
    j["outputs"].push_back({{"file", o.file}, {"checksum", o.checksum}, {"bytes", o.bytes}});
  const std::string text = j.dump(2) + "\n";
  std::ofstream out(dir_ / "manifest.json", std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("failed to write manifest in " + dir_.string());
}

}  // namespace nanotalbot::cli
