#include "semquad/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace semquad {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_commas(const std::string& value) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream stream(value);
  while (std::getline(stream, part, ',')) {
    part = trim(part);
    if (!part.empty()) parts.push_back(part);
  }
  return parts;
}

double parse_double(const std::string& key, const std::string& value) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0' || errno == ERANGE) {
    throw ConfigError("key '" + key + "': '" + value + "' is not a number");
  }
  return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0' || errno == ERANGE ||
      value.find('-') != std::string::npos) {
    throw ConfigError("key '" + key + "': '" + value +
                      "' is not a non-negative integer");
  }
  return static_cast<std::uint64_t>(v);
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(const std::string& text) {
  KeyValueConfig config;
  std::istringstream stream(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key=value, got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    }
    config.set(key, trim(line.substr(eq + 1)));
  }
  return config;
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str());
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
  values_[key] = value;
}

bool KeyValueConfig::contains(const std::string& key) const {
  return values_.count(key) > 0;
}

std::string KeyValueConfig::take_string(const std::string& key,
                                        const std::string& fallback) {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string value = it->second;
  values_.erase(it);
  return value;
}

bool KeyValueConfig::take_bool(const std::string& key, bool fallback) {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string value = it->second;
  values_.erase(it);
  if (value == "1" || value == "true" || value == "yes") return true;
  if (value == "0" || value == "false" || value == "no") return false;
  throw ConfigError("key '" + key + "': '" + value + "' is not a boolean");
}

double KeyValueConfig::take_double(const std::string& key, double fallback) {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string value = it->second;
  values_.erase(it);
  return parse_double(key, value);
}

std::size_t KeyValueConfig::take_size(const std::string& key, std::size_t fallback) {
  return static_cast<std::size_t>(take_u64(key, fallback));
}

std::uint64_t KeyValueConfig::take_u64(const std::string& key, std::uint64_t fallback) {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string value = it->second;
  values_.erase(it);
  return parse_u64(key, value);
}

std::vector<std::size_t> KeyValueConfig::take_size_list(
    const std::string& key, const std::vector<std::size_t>& fallback) {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string value = it->second;
  values_.erase(it);
  std::vector<std::size_t> out;
  for (const std::string& part : split_commas(value)) {
    out.push_back(static_cast<std::size_t>(parse_u64(key, part)));
  }
  return out;
}

std::vector<double> KeyValueConfig::take_double_list(
    const std::string& key, const std::vector<double>& fallback) {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string value = it->second;
  values_.erase(it);
  std::vector<double> out;
  for (const std::string& part : split_commas(value)) {
    out.push_back(parse_double(key, part));
  }
  return out;
}

void KeyValueConfig::finish() const {
  if (values_.empty()) return;
  std::string keys;
  for (const auto& [key, value] : values_) {
    if (!keys.empty()) keys += ", ";
    keys += key;
  }
  throw ConfigError("unknown config keys: " + keys);
}

std::string KeyValueConfig::serialize() const {
  std::ostringstream out;
  for (const auto& [key, value] : values_) out << key << "=" << value << "\n";
  return out.str();
}

}  // namespace semquad
