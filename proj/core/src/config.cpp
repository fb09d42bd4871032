#include "ptycho/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ptycho {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Config Config::load(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config " + path.string());
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse(buf.str());
}

Config Config::parse(const std::string& text) {
  Config cfg;
  std::istringstream is(text);
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error("config line " + std::to_string(lineno) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw std::runtime_error("config line " + std::to_string(lineno) + ": empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error("config line " + std::to_string(lineno) + ": empty key");
    cfg.values_[section.empty() ? key : section + "." + key] = value;
  }
  return cfg;
}

void Config::save(const std::filesystem::path& path) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write config " + path.string());
  std::string current;
  bool first = true;
  for (const auto& [dotted, value] : values_) {
    const auto dot = dotted.find('.');
    const std::string section = dot == std::string::npos ? "" : dotted.substr(0, dot);
    const std::string key = dot == std::string::npos ? dotted : dotted.substr(dot + 1);
    if (section != current || first) {
      if (!first) os << "\n";
      if (!section.empty()) os << "[" << section << "]\n";
      current = section;
      first = false;
    }
    os << key << " = " << value << "\n";
  }
}

void Config::set(const std::string& dotted_key, const std::string& value) {
  if (dotted_key.empty()) throw std::invalid_argument("config: empty key");
  values_[dotted_key] = value;
}

void Config::set_from_arg(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw std::invalid_argument("config override must look like section.key=value: " + assignment);
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

bool Config::has(const std::string& dotted_key) const { return values_.count(dotted_key) > 0; }

std::string Config::get_str(const std::string& dotted_key) const {
  const auto it = values_.find(dotted_key);
  if (it == values_.end()) throw std::runtime_error("config: missing key " + dotted_key);
  return it->second;
}

std::string Config::get_str(const std::string& dotted_key, const std::string& fallback) const {
  const auto it = values_.find(dotted_key);
  return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& dotted_key) const {
  const std::string s = get_str(dotted_key);
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("config: key " + dotted_key + " is not a number: " + s);
  }
}

double Config::get_double(const std::string& dotted_key, double fallback) const {
  return has(dotted_key) ? get_double(dotted_key) : fallback;
}

long long Config::get_int(const std::string& dotted_key) const {
  const std::string s = get_str(dotted_key);
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("config: key " + dotted_key + " is not an integer: " + s);
  }
}

long long Config::get_int(const std::string& dotted_key, long long fallback) const {
  return has(dotted_key) ? get_int(dotted_key) : fallback;
}

std::uint64_t Config::get_u64(const std::string& dotted_key, std::uint64_t fallback) const {
  if (!has(dotted_key)) return fallback;
  const std::string s = get_str(dotted_key);
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("config: key " + dotted_key + " is not an unsigned integer: " + s);
  }
}

bool Config::get_bool(const std::string& dotted_key, bool fallback) const {
  if (!has(dotted_key)) return fallback;
  const std::string s = get_str(dotted_key);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw std::runtime_error("config: key " + dotted_key + " is not a boolean: " + s);
}

}  // namespace ptycho
