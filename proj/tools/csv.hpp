#pragma once

#include <string>
#include <vector>

namespace cli {

// In-memory CSV table. Header row is mandatory; every data row has exactly
// one field per header column.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int col(const std::string& name) const;  // -1 when absent
};

// RFC-4180-style reader: quoted fields may contain commas, escaped quotes
// and newlines; accepts LF and CRLF. Throws std::runtime_error with the file
// name and line on malformed input.
CsvTable read_csv_file(const std::string& path);

// shortest decimal representation that parses back to exactly v
std::string fmt_num(double v);

// quotes the field if it contains a comma, quote or newline
std::string csv_escape(const std::string& field);

// Streaming writer with LF line endings so reruns are byte-comparable.
// Throws on I/O failure (open immediately, writes on close()).
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void write_row(const std::vector<std::string>& fields);
  void write_numeric_row(const double* vals, int n);
  void close();

 private:
  std::string path_;
  std::string buf_;
  bool closed_ = false;
};

}  // namespace cli
