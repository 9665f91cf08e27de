#pragma once

// Flat CSV reports with a "# key: value" preamble.

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace qcosym::cli {

/// Shortest decimal that parses back to the same double; "nan", "inf", "-inf".
std::string format_double(double v);
double parse_double(const std::string& s);

class CsvReport {
 public:
  std::vector<std::pair<std::string, std::string>> meta;

  void set_header(std::vector<std::string> names);
  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }

  /// Throws std::invalid_argument when the width differs from the header.
  void add_row(const std::vector<double>& values);
  void add_row(std::vector<std::string> cells);

  void add_meta(std::string key, std::string value);
  void add_meta(std::string key, double value) { add_meta(std::move(key), format_double(value)); }

  void write(std::ostream& os) const;

  static CsvReport read(std::istream& is);

  /// Value of the first preamble entry named `key`, or empty.
  std::string meta_value(const std::string& key) const;
  std::size_t column(const std::string& name) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace qcosym::cli
