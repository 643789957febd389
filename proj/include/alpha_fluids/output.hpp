#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

namespace alfl {

/// 17 significant digits, '.' decimal point, independent of the C++ locale.
std::string format_double(double v);

/// 64-bit FNV-1a of the bytes of text, as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& text);

/// Comma separated values with a header row.  Every write is checked; I/O
/// failures throw std::runtime_error.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, std::vector<std::string> header);
  void row(const std::vector<double>& values);
  /// Mixed text and numbers; numbers must already be formatted.
  void row_text(const std::vector<std::string>& cells);
  void close();

 private:
  std::string path_;
  std::size_t columns_;
  std::ofstream out_;
};

/// Flat key=value text file, keys in insertion order.
class Manifest {
 public:
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value) { set(key, format_double(value)); }
  const std::string* find(const std::string& key) const;
  void write(const std::string& path) const;
  static Manifest read(const std::string& path);
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace alfl
