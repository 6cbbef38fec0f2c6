#include "turbmit/toml_config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "turbmit/error.hpp"

namespace turbmit {

namespace {

bool is_bare_key_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

// Strips a trailing comment that is not inside a string.
std::string_view strip_comment(std::string_view s) {
  char quote = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (quote) {
      if (c == '\\' && quote == '"') {
        ++i;
      } else if (c == quote) {
        quote = 0;
      }
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#') {
      return s.substr(0, i);
    }
  }
  return s;
}

TomlValue parse_value(std::string_view raw, std::size_t line_offset) {
  const auto fail = [&](const std::string& what) -> TomlValue {
    throw FormatError("config: " + what, line_offset);
  };
  if (raw.empty()) return fail("missing value");

  if (raw.front() == '"') {
    if (raw.size() < 2 || raw.back() != '"') return fail("unterminated string");
    std::string out;
    for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
      char c = raw[i];
      if (c == '\\') {
        if (i + 2 >= raw.size()) return fail("dangling escape");
        switch (raw[++i]) {
          case 'n': c = '\n'; break;
          case 't': c = '\t'; break;
          case '\\': c = '\\'; break;
          case '"': c = '"'; break;
          default: return fail("unsupported escape");
        }
      } else if (c == '"') {
        return fail("unexpected quote in string");
      }
      out.push_back(c);
    }
    return out;
  }
  if (raw.front() == '\'') {
    if (raw.size() < 2 || raw.back() != '\'') return fail("unterminated string");
    return std::string(raw.substr(1, raw.size() - 2));
  }
  if (raw == "true") return true;
  if (raw == "false") return false;
  if (raw.front() == '[' || raw.front() == '{') return fail("arrays and tables are not supported");

  std::string digits;
  for (char c : raw) {
    if (c != '_') digits.push_back(c);
  }
  const bool is_float = digits.find_first_of(".eE") != std::string::npos ||
                        digits == "inf" || digits == "nan";
  const char* first = digits.data() + (digits.front() == '+' ? 1 : 0);
  const char* last = digits.data() + digits.size();
  if (is_float) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) return fail("bad float '" + std::string(raw) + "'");
    return v;
  }
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) return fail("bad value '" + std::string(raw) + "'");
  return v;
}

}  // namespace

TomlTable TomlTable::parse(std::string_view text) {
  TomlTable table;
  std::size_t offset = 0;
  while (offset <= text.size()) {
    std::size_t end = text.find('\n', offset);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(strip_comment(text.substr(offset, end - offset)));
    if (!line.empty()) {
      if (line.front() == '[') throw FormatError("config: tables are not supported", offset);
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw FormatError("config: expected key = value", offset);
      std::string_view key = trim(line.substr(0, eq));
      if (key.size() >= 2 && key.front() == '"' && key.back() == '"') {
        key = key.substr(1, key.size() - 2);
      } else {
        for (char c : key) {
          if (!is_bare_key_char(c)) throw FormatError("config: bad key", offset);
        }
      }
      if (key.empty()) throw FormatError("config: empty key", offset);
      std::string k(key);
      if (table.values_.contains(k)) throw FormatError("config: duplicate key " + k, offset);
      table.values_.emplace(std::move(k), parse_value(trim(line.substr(eq + 1)), offset));
    }
    offset = end + 1;
  }
  return table;
}

TomlTable TomlTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string TomlTable::get_string(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (auto* s = std::get_if<std::string>(&it->second)) return *s;
  throw ParameterError("config key '" + key + "' must be a string");
}

std::int64_t TomlTable::get_int(const std::string& key, std::int64_t fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (auto* i = std::get_if<std::int64_t>(&it->second)) return *i;
  throw ParameterError("config key '" + key + "' must be an integer");
}

double TomlTable::get_double(const std::string& key, double fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (auto* d = std::get_if<double>(&it->second)) return *d;
  if (auto* i = std::get_if<std::int64_t>(&it->second)) return static_cast<double>(*i);
  throw ParameterError("config key '" + key + "' must be a number");
}

bool TomlTable::get_bool(const std::string& key, bool fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (auto* b = std::get_if<bool>(&it->second)) return *b;
  throw ParameterError("config key '" + key + "' must be a boolean");
}

}  // namespace turbmit
