#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <variant>

namespace turbmit {

using TomlValue = std::variant<bool, std::int64_t, double, std::string>;

// Flat TOML documents: `key = value` lines with basic strings, literal
// strings, integers, floats and booleans, plus comments and blank lines.
// Tables, arrays and multi-line strings are rejected with a FormatError whose
// offset is the start of the offending line.
class TomlTable {
 public:
  static TomlTable parse(std::string_view text);
  static TomlTable load(const std::filesystem::path& path);

  bool contains(const std::string& key) const { return values_.contains(key); }
  const std::map<std::string, TomlValue>& values() const noexcept { return values_; }

  // Typed accessors; throw ParameterError when the key holds another type.
  // Integers are accepted where a double is requested.
  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

 private:
  std::map<std::string, TomlValue> values_;
};

}  // namespace turbmit
