#pragma once

#include <optional>
#include <string>
#include <vector>

namespace dicke::cli {

// Locale-independent %g-style formatting with `precision` significant digits.
std::string format_double(double value, int precision);

// RFC 4180 quoting when the field contains a comma, quote or line break.
std::string csv_quote(const std::string& field);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header, int precision = 12);

  class Row {
   public:
    Row& add(double v);
    Row& add(int v);
    Row& add(const std::string& v);
    Row& add(const char* v) { return add(std::string(v)); }
    Row& add(std::optional<double> v);  // empty cell when absent
    Row& add_bool(bool v);

   private:
    friend class CsvTable;
    explicit Row(int precision) : precision_(precision) {}
    int precision_;
    std::vector<std::string> cells_;
  };

  Row row() const { return Row(precision_); }
  void append(Row r);
  std::string str() const;
  std::size_t size() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  int precision_;
  std::vector<std::vector<std::string>> rows_;
};

// Fails with Io when the target directory is not writable; leaves nothing behind.
void check_writable(const std::string& path);

// Writes through a temporary file and a rename, removing the temporary on failure.
// An empty path writes to stdout.
void write_output(const std::string& path, const std::string& content);

}  // namespace dicke::cli
