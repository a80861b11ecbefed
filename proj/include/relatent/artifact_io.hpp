#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace relatent {

inline constexpr std::string_view kVersion = "0.1.0";

// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view data, std::uint64_t h = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);

// Identifies the run that produced an artifact; written at the top of every file.
struct Provenance {
  std::string command;
  std::uint64_t seed = 0;
  std::string config_hash;

  // "<c> relatent <version> command=<cmd> seed=<seed> config=<hash>\n"
  std::string comment_header(char comment) const;
  // JSON object on one line, newline terminated.
  std::string json_header() const;
};

std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it over the target.
void write_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace relatent
