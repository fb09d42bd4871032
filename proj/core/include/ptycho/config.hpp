#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

namespace ptycho {

// INI-flavored experiment configuration: [section] headers, key = value
// lines, '#' comments. Keys are addressed as "section.key"; --set overrides
// reuse exactly that dotted form.
class Config {
 public:
  static Config load(const std::filesystem::path& path);
  static Config parse(const std::string& text);
  void save(const std::filesystem::path& path) const;

  void set(const std::string& dotted_key, const std::string& value);
  // "section.key=value", as given on a command line.
  void set_from_arg(const std::string& assignment);

  bool has(const std::string& dotted_key) const;
  std::string get_str(const std::string& dotted_key) const;
  std::string get_str(const std::string& dotted_key, const std::string& fallback) const;
  double get_double(const std::string& dotted_key) const;
  double get_double(const std::string& dotted_key, double fallback) const;
  long long get_int(const std::string& dotted_key) const;
  long long get_int(const std::string& dotted_key, long long fallback) const;
  std::uint64_t get_u64(const std::string& dotted_key, std::uint64_t fallback) const;
  bool get_bool(const std::string& dotted_key, bool fallback) const;

  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  std::map<std::string, std::string> values_;  // dotted key -> raw value
};

}  // namespace ptycho
