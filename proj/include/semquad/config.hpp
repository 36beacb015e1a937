#ifndef SEMQUAD_CONFIG_HPP_
#define SEMQUAD_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "semquad/types.hpp"

namespace semquad {

// Flat key=value configuration. Keys are consumed by the typed take_*
// accessors; finish() rejects whatever is left so misspelled keys fail loudly.
// Lines starting with '#' and blank lines are ignored.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(const std::string& text);
  static KeyValueConfig load(const std::string& path);

  // Later assignments win, which implements flags-over-file precedence.
  void set(const std::string& key, const std::string& value);
  bool contains(const std::string& key) const;

  std::string take_string(const std::string& key, const std::string& fallback);
  bool take_bool(const std::string& key, bool fallback);
  double take_double(const std::string& key, double fallback);
  std::size_t take_size(const std::string& key, std::size_t fallback);
  std::uint64_t take_u64(const std::string& key, std::uint64_t fallback);
  // Comma-separated lists; an empty value yields an empty list.
  std::vector<std::size_t> take_size_list(const std::string& key,
                                          const std::vector<std::size_t>& fallback);
  std::vector<double> take_double_list(const std::string& key,
                                       const std::vector<double>& fallback);

  // Throws ConfigError naming every unconsumed key.
  void finish() const;

  // Deterministic serialization: sorted keys, one key=value per line.
  std::string serialize() const;

  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace semquad

#endif  // SEMQUAD_CONFIG_HPP_
