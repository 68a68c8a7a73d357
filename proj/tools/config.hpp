#pragma once

#include <istream>
#include <map>
#include <string>
#include <vector>

namespace dicke::cli {

/**
 * @brief Flat key = value configuration with '#' comments and dotted keys.
 *
 * Later assignments override earlier ones; each entry remembers where it came
 * from ("file:line" or "--set") for error messages.
 */
class Config {
 public:
  static Config parse(std::istream& in, const std::string& source);
  static Config load(const std::string& path);

  // Parses "key=value" as given to --set.
  void apply_override(const std::string& assignment);
  void set(const std::string& key, const std::string& value, const std::string& origin);
  void merge(const Config& other);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  std::string origin(const std::string& key) const;

  std::string get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  int get_int(const std::string& key) const;
  std::vector<double> get_doubles(const std::string& key) const;
  std::vector<int> get_ints(const std::string& key) const;

  // Throws Config naming the first key not in `known`.
  void reject_unknown(const std::vector<std::string>& known) const;

 private:
  struct Entry {
    std::string value;
    std::string origin;
  };
  const Entry& entry(const std::string& key) const;
  std::map<std::string, Entry> entries_;
};

}  // namespace dicke::cli
