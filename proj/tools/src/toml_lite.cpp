#include "themelab/cli/toml_lite.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "themelab/errors.hpp"

namespace themelab::cli {

TomlValue TomlValue::make_string(std::string s) {
  TomlValue v;
  v.kind = Kind::String;
  v.str = std::move(s);
  return v;
}

TomlValue TomlValue::make_integer(long n) {
  TomlValue v;
  v.kind = Kind::Integer;
  v.integer = n;
  return v;
}

const TomlValue& TomlValue::at(const std::string& key) const {
  if (kind != Kind::Table) throw ParseError("'" + key + "' looked up in a non-table value");
  auto it = table.find(key);
  if (it == table.end()) throw ParseError("missing key '" + key + "'");
  return it->second;
}

namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  TomlValue document() {
    TomlValue root;
    TomlValue* current = &root;
    for (;;) {
      skip_blank_lines();
      if (eof()) break;
      if (peek() == '[') {
        ++pos_;
        skip_space();
        const std::string name = key();
        skip_space();
        expect(']');
        end_of_line();
        if (root.table.count(name)) fail("table [" + name + "] defined twice");
        current = &root.table[name];
        current->kind = TomlValue::Kind::Table;
        continue;
      }
      key_value(*current);
      end_of_line();
    }
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    int line = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i)
      if (text_[i] == '\n') ++line;
    throw ParseError("TOML line " + std::to_string(line) + ": " + what);
  }

  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return eof() ? '\0' : text_[pos_]; }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  void skip_space() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) ++pos_;
  }

  void skip_comment() {
    if (peek() == '#')
      while (!eof() && peek() != '\n') ++pos_;
  }

  // Whitespace, newlines and comments, as allowed inside arrays.
  void skip_all() {
    for (;;) {
      skip_space();
      skip_comment();
      if (peek() == '\n' || peek() == '\r')
        ++pos_;
      else
        return;
    }
  }

  void skip_blank_lines() { skip_all(); }

  void end_of_line() {
    skip_space();
    skip_comment();
    if (peek() == '\r') ++pos_;
    if (!eof() && peek() != '\n') fail("unexpected text after value");
    if (!eof()) ++pos_;
  }

  std::string key() {
    if (peek() == '"') return basic_string();
    std::string out;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-'))
      out += text_[pos_++];
    if (out.empty()) fail("expected a key");
    return out;
  }

  void key_value(TomlValue& table) {
    const std::string k = key();
    skip_space();
    expect('=');
    skip_space();
    if (table.table.count(k)) fail("duplicate key '" + k + "'");
    table.table[k] = value();
  }

  std::string basic_string() {
    expect('"');
    std::string out;
    for (;;) {
      if (eof() || peek() == '\n') fail("unterminated string");
      const char c = text_[pos_++];
      if (c == '"') break;
      if (c != '\\') {
        out += c;
        continue;
      }
      const char e = text_[pos_++];
      switch (e) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        default: fail(std::string("unsupported escape \\") + e);
      }
    }
    return out;
  }

  std::string literal_string() {
    expect('\'');
    std::string out;
    while (!eof() && peek() != '\'' && peek() != '\n') out += text_[pos_++];
    expect('\'');
    return out;
  }

  TomlValue value() {
    const char c = peek();
    if (c == '"') return TomlValue::make_string(basic_string());
    if (c == '\'') return TomlValue::make_string(literal_string());
    if (c == '[') {
      ++pos_;
      TomlValue v;
      v.kind = TomlValue::Kind::Array;
      for (;;) {
        skip_all();
        if (peek() == ']') {
          ++pos_;
          return v;
        }
        v.items.push_back(value());
        skip_all();
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        skip_all();
        expect(']');
        return v;
      }
    }
    if (c == '{') {
      ++pos_;
      TomlValue v;
      v.kind = TomlValue::Kind::Table;
      skip_space();
      if (peek() == '}') {
        ++pos_;
        return v;
      }
      for (;;) {
        skip_space();
        key_value(v);
        skip_space();
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        expect('}');
        return v;
      }
    }
    std::string word;
    while (!eof() && !std::isspace(static_cast<unsigned char>(peek())) && peek() != ',' && peek() != ']' &&
           peek() != '}' && peek() != '#')
      word += text_[pos_++];
    if (word == "true" || word == "false") {
      TomlValue v;
      v.kind = TomlValue::Kind::Boolean;
      v.boolean = word == "true";
      return v;
    }
    std::string digits;
    for (char d : word)
      if (d != '_') digits += d;
    std::size_t used = 0;
    long n = 0;
    try {
      n = std::stol(digits, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (digits.empty() || used != digits.size()) {
      if (digits.find_first_of(".eE") != std::string::npos)
        fail("floating-point value '" + word + "'; write rationals as strings like \"5/2\"");
      fail("cannot read value '" + word + "'");
    }
    return TomlValue::make_integer(n);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

TomlValue parse_toml(std::string_view text) { return Reader(text).document(); }

TomlValue parse_toml_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_toml(buf.str());
}

}  // namespace themelab::cli
