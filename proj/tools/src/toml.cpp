#include "vmi/harness/toml.hpp"

#include <cctype>
#include <charconv>
#include <set>
#include <vector>

namespace vmi::harness {

namespace {

using nlohmann::json;

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  TomlDocument run() {
    json* table = &doc_.root;
    std::string table_path;
    while (!at_end()) {
      skip_blank_and_comments();
      if (at_end()) break;
      if (peek() == '[') {
        table = header(table_path);
      } else {
        key_value(*table, table_path);
      }
      end_of_line();
    }
    return std::move(doc_);
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  [[noreturn]] void fail(const std::string& message, const std::string& field = "") const {
    throw ParseError(line_, field, message);
  }

  void skip_spaces() {
    while (!at_end() && (peek() == ' ' || peek() == '\t')) ++pos_;
  }

  void skip_comment() {
    if (peek() == '#') {
      while (!at_end() && peek() != '\n') ++pos_;
    }
  }

  void newline() {
    if (peek() == '\r') ++pos_;
    if (peek() == '\n') {
      ++pos_;
      ++line_;
    }
  }

  void skip_blank_and_comments() {
    for (;;) {
      skip_spaces();
      skip_comment();
      if (peek() == '\n' || peek() == '\r') {
        newline();
        continue;
      }
      return;
    }
  }

  // Whitespace, comments and newlines inside arrays.
  void skip_array_space() { skip_blank_and_comments(); }

  void end_of_line() {
    skip_spaces();
    skip_comment();
    if (at_end()) return;
    if (peek() != '\n' && peek() != '\r') fail("unexpected text after value");
    newline();
  }

  std::string bare_key() {
    const std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-')) ++pos_;
    if (pos_ == start) {
      if (peek() == '"') return quoted_string();
      fail("expected a key");
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  std::vector<std::string> dotted_key() {
    std::vector<std::string> parts;
    for (;;) {
      skip_spaces();
      parts.push_back(bare_key());
      skip_spaces();
      if (peek() != '.') return parts;
      ++pos_;
    }
  }

  static std::string join(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
  }

  json* header(std::string& table_path) {
    ++pos_;
    const bool array = peek() == '[';
    if (array) ++pos_;
    const auto parts = dotted_key();
    skip_spaces();
    if (peek() != ']') fail("expected ']' to close table header");
    ++pos_;
    if (array) {
      if (peek() != ']') fail("expected ']]' to close array-of-tables header");
      ++pos_;
    }

    json* node = &doc_.root;
    std::string path;
    for (std::size_t k = 0; k < parts.size(); ++k) {
      path = join(path, parts[k]);
      const bool last = k + 1 == parts.size();
      if (!node->contains(parts[k])) {
        if (last && array) {
          (*node)[parts[k]] = json::array();
        } else {
          (*node)[parts[k]] = json::object();
        }
        doc_.lines.emplace(path, line_);
      } else if (last && !array && explicit_tables_.contains(path)) {
        fail("table defined twice", path);
      }
      node = &(*node)[parts[k]];
      if (node->is_array()) {
        if (last && array) {
          node->push_back(json::object());
          path += "[" + std::to_string(node->size() - 1) + "]";
          doc_.lines.emplace(path, line_);
          node = &node->back();
          break;
        }
        if (node->empty() || !node->back().is_object()) fail("key is not a table", path);
        path += "[" + std::to_string(node->size() - 1) + "]";
        node = &node->back();
      } else if (!node->is_object()) {
        fail("key is not a table", path);
      } else if (last && array) {
        fail("key is already a table, not an array of tables", path);
      }
    }
    if (!array) explicit_tables_.insert(path);
    table_path = path;
    return node;
  }

  void key_value(json& table, const std::string& table_path) {
    const auto parts = dotted_key();
    skip_spaces();
    if (peek() != '=') fail("expected '=' after key", join(table_path, parts.front()));
    ++pos_;
    skip_spaces();
    json* node = &table;
    std::string path = table_path;
    for (std::size_t k = 0; k + 1 < parts.size(); ++k) {
      path = join(path, parts[k]);
      if (!node->contains(parts[k])) {
        (*node)[parts[k]] = json::object();
        doc_.lines.emplace(path, line_);
      }
      node = &(*node)[parts[k]];
      if (!node->is_object()) fail("key is not a table", path);
    }
    path = join(path, parts.back());
    if (node->contains(parts.back())) fail("duplicate key", path);
    doc_.lines.emplace(path, line_);
    (*node)[parts.back()] = value(path);
  }

  json value(const std::string& path) {
    const char c = peek();
    if (c == '"') return quoted_string();
    if (c == '\'') return literal_string();
    if (c == '[') return array(path);
    if (c == '{') return inline_table(path);
    if (text_.substr(pos_, 4) == "true") {
      pos_ += 4;
      return true;
    }
    if (text_.substr(pos_, 5) == "false") {
      pos_ += 5;
      return false;
    }
    return number(path);
  }

  std::string quoted_string() {
    ++pos_;
    std::string out;
    for (;;) {
      if (at_end() || peek() == '\n') fail("unterminated string");
      const char c = text_[pos_++];
      if (c == '"') return out;
      if (c != '\\') {
        out += c;
        continue;
      }
      if (at_end()) fail("unterminated string");
      const char e = text_[pos_++];
      switch (e) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        default: fail(std::string("unsupported escape '\\") + e + "'");
      }
    }
  }

  std::string literal_string() {
    ++pos_;
    const std::size_t start = pos_;
    while (!at_end() && peek() != '\'' && peek() != '\n') ++pos_;
    if (peek() != '\'') fail("unterminated string");
    std::string out(text_.substr(start, pos_ - start));
    ++pos_;
    return out;
  }

  json array(const std::string& path) {
    ++pos_;
    json out = json::array();
    for (;;) {
      skip_array_space();
      if (peek() == ']') {
        ++pos_;
        return out;
      }
      out.push_back(value(path + "[" + std::to_string(out.size()) + "]"));
      skip_array_space();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      if (peek() != ']') fail("expected ',' or ']' in array", path);
    }
  }

  json inline_table(const std::string& path) {
    ++pos_;
    json out = json::object();
    skip_spaces();
    if (peek() == '}') {
      ++pos_;
      return out;
    }
    for (;;) {
      skip_spaces();
      const std::string key = bare_key();
      const std::string sub = path + "." + key;
      skip_spaces();
      if (peek() != '=') fail("expected '=' in inline table", sub);
      ++pos_;
      skip_spaces();
      if (out.contains(key)) fail("duplicate key", sub);
      doc_.lines.emplace(sub, line_);
      out[key] = value(sub);
      skip_spaces();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      if (peek() == '}') {
        ++pos_;
        return out;
      }
      fail("expected ',' or '}' in inline table", path);
    }
  }

  json number(const std::string& path) {
    const std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '+' || peek() == '-' ||
                         peek() == '.' || peek() == '_')) {
      ++pos_;
    }
    std::string token;
    for (char c : text_.substr(start, pos_ - start)) {
      if (c != '_') token += c;
    }
    if (token.empty()) fail("expected a value", path);
    const bool is_float = token.find_first_of(".eE") != std::string::npos || token == "inf" ||
                          token == "+inf" || token == "-inf" || token == "nan";
    const char* first = token.data() + (token.front() == '+' ? 1 : 0);
    const char* last = token.data() + token.size();
    if (!is_float) {
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(first, last, v);
      if (ec == std::errc() && ptr == last) return v;
    } else {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(first, last, v);
      if (ec == std::errc() && ptr == last) return v;
    }
    fail("invalid value '" + token + "'", path);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  TomlDocument doc_;
  std::set<std::string> explicit_tables_;
};

}  // namespace

TomlDocument parse_toml(std::string_view text) { return Reader(text).run(); }

}  // namespace vmi::harness
