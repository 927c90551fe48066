#pragma once

// Reader for the subset of TOML used by experiment configs: comments,
// [table] and [[array.of.tables]] headers, bare and dotted keys, basic
// strings, integers, floats, booleans, arrays and inline tables.  Documents
// are returned as JSON values together with the source line of every key.

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

namespace vmi::harness {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, std::string field, const std::string& message)
      : std::runtime_error(format(line, field, message)), line_(line), field_(std::move(field)) {}

  int line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  static std::string format(int line, const std::string& field, const std::string& message) {
    std::string out = "line " + std::to_string(line);
    if (!field.empty()) out += ", field '" + field + "'";
    return out + ": " + message;
  }

  int line_;
  std::string field_;
};

struct TomlDocument {
  nlohmann::json root = nlohmann::json::object();
  // Dotted path (array elements as [k]) -> 1-based line of the defining key.
  std::map<std::string, int> lines;

  int line_of(const std::string& path) const {
    auto it = lines.find(path);
    return it == lines.end() ? 0 : it->second;
  }
};

TomlDocument parse_toml(std::string_view text);

}  // namespace vmi::harness
