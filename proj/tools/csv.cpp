#include "csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cli {

int CsvTable::col(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

namespace {

[[noreturn]] void fail(const std::string& path, std::size_t line, const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

// splits the whole file into records, honouring quoted fields
std::vector<std::vector<std::string>> parse_records(const std::string& text,
                                                    const std::string& path) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool any = false;  // current record has content (guards a trailing newline)
  std::size_t line = 1;

  const auto end_field = [&] {
    fields.push_back(std::move(field));
    field.clear();
  };
  const auto end_record = [&] {
    end_field();
    records.push_back(std::move(fields));
    fields.clear();
    any = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty()) fail(path, line, "quote inside unquoted field");
        quoted = true;
        any = true;
        break;
      case ',':
        end_field();
        any = true;
        break;
      case '\r':
        if (i + 1 >= text.size() || text[i + 1] != '\n')
          fail(path, line, "bare carriage return");
        break;  // consumed by the following newline
      case '\n':
        if (any || !field.empty() || !fields.empty()) end_record();
        ++line;
        break;
      default:
        field += c;
        any = true;
        break;
    }
  }
  if (quoted) fail(path, line, "unterminated quoted field");
  if (any || !field.empty() || !fields.empty()) end_record();
  return records;
}

}  // namespace

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();

  std::vector<std::vector<std::string>> records = parse_records(text, path);
  if (records.empty()) throw std::runtime_error(path + ": missing header row");

  CsvTable table;
  table.header = std::move(records.front());
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != table.header.size())
      fail(path, r + 1,
           "expected " + std::to_string(table.header.size()) + " fields, got " +
               std::to_string(records[r].size()));
    table.rows.push_back(std::move(records[r]));
  }
  return table;
}

std::string fmt_num(double v) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

CsvWriter::CsvWriter(const std::string& path) : path_(path) {
  std::ofstream probe(path, std::ios::binary | std::ios::trunc);
  if (!probe) throw std::runtime_error("cannot write '" + path + "'");
}

CsvWriter::~CsvWriter() {
  try {
    close();
  } catch (...) {
    // destructor swallows I/O errors; call close() to observe them
  }
}

void CsvWriter::write_row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) buf_ += ',';
    buf_ += csv_escape(fields[i]);
  }
  buf_ += '\n';
}

void CsvWriter::write_numeric_row(const double* vals, int n) {
  for (int i = 0; i < n; ++i) {
    if (i) buf_ += ',';
    buf_ += fmt_num(vals[i]);
  }
  buf_ += '\n';
}

void CsvWriter::close() {
  if (closed_) return;
  closed_ = true;
  std::ofstream out(path_, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path_ + "'");
  out << buf_;
  out.close();
  if (!out) throw std::runtime_error("write failed for '" + path_ + "'");
}

}  // namespace cli
