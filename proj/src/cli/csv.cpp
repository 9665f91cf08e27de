#include "qcosym/cli/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qcosym::cli {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

void CsvReport::set_header(std::vector<std::string> names) {
  if (!rows_.empty()) throw std::logic_error("header set after rows");
  header_ = std::move(names);
}

void CsvReport::add_row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_double(v));
  add_row(std::move(cells));
}

void CsvReport::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size())
    throw std::invalid_argument("row has " + std::to_string(cells.size()) + " cells, header has " +
                                std::to_string(header_.size()));
  rows_.push_back(std::move(cells));
}

void CsvReport::add_meta(std::string key, std::string value) {
  for (char& c : value)
    if (c == '\n' || c == '\r') c = ' ';
  meta.emplace_back(std::move(key), std::move(value));
}

namespace {

void write_line(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    os << cells[i];
  }
  os << '\n';
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

void CsvReport::write(std::ostream& os) const {
  for (const auto& [k, v] : meta) os << "# " << k << ": " << v << '\n';
  write_line(os, header_);
  for (const auto& r : rows_) write_line(os, r);
}

CsvReport CsvReport::read(std::istream& is) {
  CsvReport rep;
  std::string line;
  bool have_header = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      const auto colon = line.find(": ", 2);
      if (colon == std::string::npos) {
        rep.meta.emplace_back(line.substr(2), "");
      } else {
        rep.meta.emplace_back(line.substr(2, colon - 2), line.substr(colon + 2));
      }
      continue;
    }
    if (!have_header) {
      rep.header_ = split(line);
      have_header = true;
    } else {
      rep.add_row(split(line));
    }
  }
  return rep;
}

std::string CsvReport::meta_value(const std::string& key) const {
  for (const auto& [k, v] : meta)
    if (k == key) return v;
  return {};
}

std::size_t CsvReport::column(const std::string& name) const {
  for (std::size_t i = 0; i < header_.size(); ++i)
    if (header_[i] == name) return i;
  throw std::out_of_range("no column '" + name + "'");
}

}  // namespace qcosym::cli
