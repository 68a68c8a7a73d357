#include "csv.hpp"

#include "dicke/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace dicke::cli {

std::string format_double(double value, int precision) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, precision);
  return std::string(buf, res.ptr);
}

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

CsvTable::CsvTable(std::vector<std::string> header, int precision)
    : header_(std::move(header)), precision_(precision) {}

CsvTable::Row& CsvTable::Row::add(double v) {
  cells_.push_back(format_double(v, precision_));
  return *this;
}

CsvTable::Row& CsvTable::Row::add(int v) {
  cells_.push_back(std::to_string(v));
  return *this;
}

CsvTable::Row& CsvTable::Row::add(const std::string& v) {
  cells_.push_back(csv_quote(v));
  return *this;
}

CsvTable::Row& CsvTable::Row::add(std::optional<double> v) {
  cells_.push_back(v ? format_double(*v, precision_) : std::string());
  return *this;
}

CsvTable::Row& CsvTable::Row::add_bool(bool v) {
  cells_.push_back(v ? "1" : "0");
  return *this;
}

void CsvTable::append(Row r) {
  if (r.cells_.size() != header_.size())
    throw Error(ErrorKind::Internal, "row has " + std::to_string(r.cells_.size()) + " cells, header has " +
                                         std::to_string(header_.size()));
  rows_.push_back(std::move(r.cells_));
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  std::vector<std::string> quoted;
  for (const auto& h : header_) quoted.push_back(csv_quote(h));
  line(quoted);
  for (const auto& r : rows_) line(r);
  return out;
}

namespace {

std::string temp_name(const std::string& path) { return path + ".partial"; }

}  // namespace

void check_writable(const std::string& path) {
  if (path.empty()) return;
  const std::string tmp = temp_name(path);
  {
    std::ofstream probe(tmp, std::ios::binary | std::ios::trunc);
    if (!probe) throw Error(ErrorKind::Io, "output path '" + path + "' is not writable", "output.csv");
  }
  std::remove(tmp.c_str());
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content << std::flush;
    return;
  }
  const std::string tmp = temp_name(path);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    out.flush();
    if (!out) {
      out.close();
      std::remove(tmp.c_str());
      throw Error(ErrorKind::Io, "failed writing '" + path + "'", "output.csv");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::remove(tmp.c_str());
    throw Error(ErrorKind::Io, "cannot move output into place at '" + path + "': " + ec.message(), "output.csv");
  }
}

}  // namespace dicke::cli
