#pragma once

// Key-value experiment configuration (TOML-style subset) with typed access.
//
//   schema_version = 1
//   seed = 42
//   [distribution]
//   kind = "uniform"
//   a = 0.0
//   b = 1.0
//
// Section headers prefix the keys ("distribution.kind"). Values are strings,
// booleans, integers, floats, or single-line arrays of numbers.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace lifshitz {

inline constexpr std::int64_t kConfigSchemaVersion = 1;

class Config {
 public:
  using Value = std::variant<bool, std::int64_t, double, std::string, std::vector<double>>;

  static Config parse(std::string_view text, const std::string& source = "<string>");
  // A metadata sidecar (.json with a "config" object), a plain JSON object, or TOML-style text.
  static Config load(const std::string& path);
  static Config from_json(const nlohmann::json& j);

  // "key=value", value in config syntax; bare words are taken as strings.
  void apply_override(std::string_view assignment);
  void set(const std::string& key, Value value) { values_[key] = std::move(value); }
  void erase(const std::string& key) { values_.erase(key); }

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  double number(const std::string& key) const;
  std::int64_t integer(const std::string& key) const;
  std::uint64_t unsigned_integer(const std::string& key) const;
  const std::string& string(const std::string& key) const;
  bool boolean(const std::string& key) const;
  std::vector<double> numbers(const std::string& key) const;

  double number_or(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }
  std::int64_t integer_or(const std::string& key, std::int64_t fallback) const {
    return has(key) ? integer(key) : fallback;
  }
  bool boolean_or(const std::string& key, bool fallback) const { return has(key) ? boolean(key) : fallback; }

  const std::map<std::string, Value>& values() const { return values_; }

  // One "key = value" line per entry in key order; the basis of the output hash.
  std::string canonical() const;
  // 16 hex digits of FNV-1a over canonical().
  std::string hash() const;
  nlohmann::json to_json() const;

 private:
  [[noreturn]] void fail(const std::string& key, const std::string& what) const;
  const Value& at(const std::string& key) const;

  std::map<std::string, Value> values_;
};

Config::Value parse_config_value(std::string_view text, const std::string& where);

}  // namespace lifshitz
