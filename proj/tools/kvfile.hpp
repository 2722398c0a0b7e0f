#pragma once

#include <string>
#include <vector>

namespace cli {

// One key=value line of a config file. Flat files leave section empty;
// "[name]" headers switch the section for the lines that follow.
struct KvEntry {
  std::string section;
  std::string key;
  std::string value;
};

// Parses a config file: blank lines and lines starting with '#' or ';' are
// ignored, values keep internal spaces, keys/values are trimmed. Entries are
// returned in file order. Throws std::runtime_error on malformed lines.
std::vector<KvEntry> read_kv_file(const std::string& path);

// section names in first-appearance order
std::vector<std::string> kv_sections(const std::vector<KvEntry>& entries);

}  // namespace cli
