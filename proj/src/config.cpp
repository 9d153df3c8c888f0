#include "lifshitz/config.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "lifshitz/errors.hpp"

namespace lifshitz {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

std::optional<double> parse_double(std::string_view s) {
  const std::string tmp(s);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(tmp.c_str(), &end);
  if (tmp.empty() || end != tmp.c_str() + tmp.size() || errno == ERANGE) return std::nullopt;
  return v;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string format_value(const Config::Value& v) {
  struct {
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(double d) const { return format_double(d); }
    std::string operator()(const std::string& s) const { return "\"" + s + "\""; }
    std::string operator()(const std::vector<double>& xs) const {
      std::string out = "[";
      for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + format_double(xs[i]);
      return out + "]";
    }
  } visitor;
  return std::visit(visitor, v);
}

}  // namespace

Config::Value parse_config_value(std::string_view text, const std::string& where) {
  const auto s = trim(text);
  if (s.empty()) throw ValidationError(where + ": missing value");
  if (s.front() == '"') {
    if (s.size() < 2 || s.back() != '"') throw ValidationError(where + ": unterminated string");
    return std::string(s.substr(1, s.size() - 2));
  }
  if (s == "true") return true;
  if (s == "false") return false;
  if (s.front() == '[') {
    if (s.back() != ']') throw ValidationError(where + ": unterminated array");
    std::vector<double> xs;
    auto body = trim(s.substr(1, s.size() - 2));
    while (!body.empty()) {
      const auto comma = body.find(',');
      const auto item = trim(body.substr(0, comma));
      if (!item.empty()) {
        const auto d = parse_double(item);
        if (!d) throw ValidationError(where + ": array entries must be numbers, got '" + std::string(item) + "'");
        xs.push_back(*d);
      }
      if (comma == std::string_view::npos) break;
      body = body.substr(comma + 1);
    }
    return xs;
  }
  if (const auto i = parse_int(s)) return *i;
  if (const auto d = parse_double(s)) return *d;
  throw ValidationError(where + ": cannot parse value '" + std::string(s) + "'");
}

Config Config::parse(std::string_view text, const std::string& source) {
  Config cfg;
  std::string section;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    auto line = trim(strip_comment(text.substr(0, nl)));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') throw ValidationError(where + ": malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ValidationError(where + ": expected key = value");
    const auto key = std::string(trim(line.substr(0, eq)));
    if (key.empty()) throw ValidationError(where + ": empty key");
    const auto full = section.empty() ? key : section + "." + key;
    cfg.values_[full] = parse_config_value(line.substr(eq + 1), where + " (" + full + ")");
  }
  return cfg;
}

Config Config::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("config json: expected an object");
  Config cfg;
  for (const auto& [key, v] : j.items()) {
    if (v.is_boolean()) {
      cfg.values_[key] = v.get<bool>();
    } else if (v.is_number_integer()) {
      cfg.values_[key] = v.get<std::int64_t>();
    } else if (v.is_number()) {
      cfg.values_[key] = v.get<double>();
    } else if (v.is_string()) {
      cfg.values_[key] = v.get<std::string>();
    } else if (v.is_array()) {
      cfg.values_[key] = v.get<std::vector<double>>();
    } else {
      throw ValidationError("config json: unsupported value for '" + key + "'");
    }
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ValidationError("config: " + path + ": " + e.what());
    }
    return from_json(j.contains("config") ? j.at("config") : j);
  }
  return parse(text, path);
}

void Config::apply_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) throw ValidationError("override '" + std::string(assignment) + "': expected key=value");
  const auto key = std::string(trim(assignment.substr(0, eq)));
  const auto raw = trim(assignment.substr(eq + 1));
  const std::string where = "override " + key;
  try {
    values_[key] = parse_config_value(raw, where);
  } catch (const ValidationError&) {
    values_[key] = std::string(raw);
  }
}

void Config::fail(const std::string& key, const std::string& what) const {
  throw ValidationError("config field '" + key + "': " + what);
}

const Config::Value& Config::at(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) fail(key, "required but missing");
  return it->second;
}

double Config::number(const std::string& key) const {
  const auto& v = at(key);
  if (const auto* d = std::get_if<double>(&v)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  fail(key, "expected a number");
}

std::int64_t Config::integer(const std::string& key) const {
  const auto& v = at(key);
  if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
  if (const auto* d = std::get_if<double>(&v)) {
    if (std::trunc(*d) == *d && std::abs(*d) < 9.0e15) return static_cast<std::int64_t>(*d);
  }
  fail(key, "expected an integer");
}

std::uint64_t Config::unsigned_integer(const std::string& key) const {
  const auto v = integer(key);
  if (v < 0) fail(key, "expected a nonnegative integer");
  return static_cast<std::uint64_t>(v);
}

const std::string& Config::string(const std::string& key) const {
  const auto& v = at(key);
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  fail(key, "expected a string");
}

bool Config::boolean(const std::string& key) const {
  const auto& v = at(key);
  if (const auto* b = std::get_if<bool>(&v)) return *b;
  fail(key, "expected true or false");
}

std::vector<double> Config::numbers(const std::string& key) const {
  const auto& v = at(key);
  if (const auto* xs = std::get_if<std::vector<double>>(&v)) return *xs;
  if (std::holds_alternative<double>(v) || std::holds_alternative<std::int64_t>(v)) return {number(key)};
  fail(key, "expected an array of numbers");
}

std::string Config::canonical() const {
  std::string out;
  for (const auto& [key, v] : values_) out += key + " = " + format_value(v) + "\n";
  return out;
}

std::string Config::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

nlohmann::json Config::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [key, v] : values_) {
    std::visit([&](const auto& x) { j[key] = x; }, v);
  }
  return j;
}

}  // namespace lifshitz
