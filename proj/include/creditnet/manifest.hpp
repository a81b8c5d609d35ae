#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "creditnet/error.hpp"
#include "creditnet/version.hpp"

namespace creditnet {

/// FNV-1a 64-bit digest of a file's bytes, hex encoded. Content
/// fingerprinting for run manifests, not a cryptographic hash.
inline std::string fnv1a64_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for digest: " + path);
  std::uint64_t h = 0xcbf29ce484222325ull;
  char buf[4096];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ull;
    }
    if (!in) break;
  }
  char hex[17];
  static const char* digits = "0123456789abcdef";
  for (int i = 15; i >= 0; --i) {
    hex[i] = digits[h & 0xf];
    h >>= 4;
  }
  hex[16] = '\0';
  return hex;
}

/// Provenance record written next to every command's outputs: the command,
/// input digests, effective configuration, and produced files. One JSON line
/// per run; no timestamps so identical runs stay byte-identical.
struct RunManifest {
  std::string command;
  std::vector<std::string> args;
  std::vector<std::string> input_paths;
  std::map<std::string, std::string> config;
  std::vector<std::string> outputs;

  nlohmann::json to_json() const {
    nlohmann::json inputs = nlohmann::json::array();
    for (const auto& p : input_paths)
      inputs.push_back({{"path", p}, {"fnv1a64", fnv1a64_digest(p)}});
    return nlohmann::json{{"tool", kToolName}, {"version", kVersion},
                          {"command", command}, {"args", args},
                          {"inputs", inputs},   {"config", config},
                          {"outputs", outputs}};
  }
};

inline void write_manifest(const std::string& path, const RunManifest& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << m.to_json().dump() << "\n";
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace creditnet
