#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace themelab::cli {

/// Value of the TOML subset read by the input documents: strings,
/// integers, booleans, arrays and tables (dotted keys are not supported).
struct TomlValue {
  enum class Kind { String, Integer, Boolean, Array, Table };
  Kind kind = Kind::Table;
  std::string str;
  long integer = 0;
  bool boolean = false;
  std::vector<TomlValue> items;
  std::map<std::string, TomlValue> table;

  static TomlValue make_string(std::string s);
  static TomlValue make_integer(long v);

  bool has(const std::string& key) const { return kind == Kind::Table && table.count(key) != 0; }
  const TomlValue& at(const std::string& key) const;
};

/// Throws themelab::ParseError with a line number on malformed input.
TomlValue parse_toml(std::string_view text);
TomlValue parse_toml_file(const std::string& path);

}  // namespace themelab::cli
