#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace vxf {

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

struct FileDigest {
  std::string path;
  std::string sha256;
};

// Record of one CLI run: inputs, parameters and outputs with digests.
// Re-running the recorded command on the same inputs reproduces the outputs
// byte for byte.
struct RunManifest {
  std::string tool = "vxf";
  std::string version;
  std::string command;
  std::map<std::string, std::string> parameters;
  std::vector<FileDigest> inputs;
  std::vector<FileDigest> outputs;
};

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path);
RunManifest read_manifest(const std::filesystem::path& path);

// Recomputes every digest; returns one line per mismatch (empty = verified).
std::vector<std::string> check_manifest(const std::filesystem::path& path);

}  // namespace vxf
