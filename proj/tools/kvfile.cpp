#include "kvfile.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<KvEntry> read_kv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");

  std::vector<KvEntry> entries;
  std::string section;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": unclosed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key=value");
    KvEntry e;
    e.section = section;
    e.key = trim(line.substr(0, eq));
    e.value = trim(line.substr(eq + 1));
    if (e.key.empty())
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": empty key");
    entries.push_back(std::move(e));
  }
  return entries;
}

std::vector<std::string> kv_sections(const std::vector<KvEntry>& entries) {
  std::vector<std::string> names;
  for (const auto& e : entries)
    if (std::find(names.begin(), names.end(), e.section) == names.end())
      names.push_back(e.section);
  return names;
}

}  // namespace cli
