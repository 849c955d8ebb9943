#include "nesta/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace nesta {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string bare_name(const std::string& key) {
  const auto dot = key.rfind('.');
  return dot == std::string::npos ? key : key.substr(dot + 1);
}

}  // namespace

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str());
}

Config Config::parse_string(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw ConfigError("malformed section header at line " +
                          std::to_string(lineno) + ": " + t);
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("malformed config line " + std::to_string(lineno) +
                        ": " + t);
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw ConfigError("malformed config line " + std::to_string(lineno) +
                        ": empty key");
    cfg.values_[section.empty() ? key : section + "." + key] = value;
  }
  return cfg;
}

bool Config::has(const std::string& key) const {
  return values_.count(key) != 0;
}

std::string Config::get_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing key: " + bare_name(key));
  return it->second;
}

std::string Config::get_string(const std::string& key,
                               const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key) const {
  const std::string v = get_string(key);
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("invalid value for key: " + bare_name(key));
  }
}

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

std::int64_t Config::get_int(const std::string& key) const {
  const std::string v = get_string(key);
  try {
    std::size_t pos = 0;
    const std::int64_t i = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw ConfigError("invalid value for key: " + bare_name(key));
  }
}

std::int64_t Config::get_int(const std::string& key,
                             std::int64_t fallback) const {
  return has(key) ? get_int(key) : fallback;
}

std::uint64_t Config::get_u64(const std::string& key) const {
  const std::string v = get_string(key);
  try {
    std::size_t pos = 0;
    const std::uint64_t u = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return u;
  } catch (const std::exception&) {
    throw ConfigError("invalid value for key: " + bare_name(key));
  }
}

std::uint64_t Config::get_u64(const std::string& key,
                              std::uint64_t fallback) const {
  return has(key) ? get_u64(key) : fallback;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string v = get_string(key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("invalid value for key: " + bare_name(key));
}

std::vector<double> Config::get_double_list(const std::string& key) const {
  const std::string v = get_string(key);
  std::vector<double> out;
  std::string item;
  std::istringstream in(v);
  while (std::getline(in, item, ',')) {
    std::istringstream parts(item);
    std::string tok;
    while (parts >> tok) {
      try {
        out.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw ConfigError("invalid value for key: " + bare_name(key));
      }
    }
  }
  if (out.empty()) throw ConfigError("invalid value for key: " + bare_name(key));
  return out;
}

std::vector<std::string> Config::keys() const {
  std::vector<std::string> out;
  out.reserve(values_.size());
  for (const auto& [k, v] : values_) out.push_back(k);
  return out;
}

}  // namespace nesta
