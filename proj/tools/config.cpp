#include "config.hpp"

#include "dicke/errors.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace dicke::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool valid_key(const std::string& k) {
  if (k.empty() || k.front() == '.' || k.back() == '.') return false;
  return std::all_of(k.begin(), k.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '.';
  });
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) out.push_back(trim(item));
  return out;
}

template <class T>
T parse_number(const std::string& text, const std::string& key, const std::string& origin) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && text.front() == '+') ++first;
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last || text.empty())
    throw Error(ErrorKind::Config, origin + ": " + key + ": cannot parse '" + text + "' as a number", key);
  return value;
}

}  // namespace

Config Config::parse(std::istream& in, const std::string& source) {
  Config c;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::Config, where + ": expected 'key = value'", "line " + std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!valid_key(key)) throw Error(ErrorKind::Config, where + ": invalid key '" + key + "'", key);
    if (value.empty()) throw Error(ErrorKind::Config, where + ": empty value for '" + key + "'", key);
    c.set(key, value, where);
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open config file '" + path + "'", "config");
  return parse(in, path);
}

void Config::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw Error(ErrorKind::Config, "--set " + assignment + ": expected key=value", assignment);
  const std::string key = trim(assignment.substr(0, eq));
  const std::string value = trim(assignment.substr(eq + 1));
  if (!valid_key(key)) throw Error(ErrorKind::Config, "--set: invalid key '" + key + "'", key);
  if (value.empty()) throw Error(ErrorKind::Config, "--set: empty value for '" + key + "'", key);
  set(key, value, "--set");
}

void Config::set(const std::string& key, const std::string& value, const std::string& origin) {
  entries_[key] = {value, origin};
}

void Config::merge(const Config& other) {
  for (const auto& [k, e] : other.entries_) entries_[k] = e;
}

std::string Config::origin(const std::string& key) const { return has(key) ? entry(key).origin : "default"; }

const Config::Entry& Config::entry(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw Error(ErrorKind::Config, "missing required key '" + key + "'", key);
  return it->second;
}

std::string Config::get_string(const std::string& key) const { return entry(key).value; }

double Config::get_double(const std::string& key) const {
  const auto& e = entry(key);
  return parse_number<double>(e.value, key, e.origin);
}

int Config::get_int(const std::string& key) const {
  const auto& e = entry(key);
  return parse_number<int>(e.value, key, e.origin);
}

std::vector<double> Config::get_doubles(const std::string& key) const {
  const auto& e = entry(key);
  std::vector<double> out;
  for (const auto& item : split_list(e.value)) out.push_back(parse_number<double>(item, key, e.origin));
  return out;
}

std::vector<int> Config::get_ints(const std::string& key) const {
  const auto& e = entry(key);
  std::vector<int> out;
  for (const auto& item : split_list(e.value)) out.push_back(parse_number<int>(item, key, e.origin));
  return out;
}

void Config::reject_unknown(const std::vector<std::string>& known) const {
  for (const auto& [k, e] : entries_)
    if (std::find(known.begin(), known.end(), k) == known.end())
      throw Error(ErrorKind::Config, e.origin + ": unknown key '" + k + "'", k);
}

}  // namespace dicke::cli
