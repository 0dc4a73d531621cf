#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace cascadeq {

// Flat sectioned key-value configuration:
//
//   # comment
//   [market]
//   num_agents = 1000
//
// The key set is closed: every key has a built-in default and unknown
// sections or keys are rejected with the offending line. Values are kept as
// text and converted on access so that conversion errors can name their
// source.
class Config {
 public:
  struct Entry {
    std::string value;
    std::string origin;  // "default", "<file>:<line>" or "--override"
    int line = 0;
  };

  static Config defaults();

  // Merges a file over the current values. Throws ConfigError carrying the
  // line number on syntax errors, unknown keys and duplicates.
  void load_file(const std::filesystem::path& path);
  void load_text(std::string_view text, const std::string& source);

  // "section.key=value".
  void apply_override(std::string_view assignment);

  void set(const std::string& section, const std::string& key, std::string value,
           std::string origin = "--override", int line = 0);

  bool has(const std::string& section, const std::string& key) const;
  const Entry& entry(const std::string& section, const std::string& key) const;
  const std::string& text(const std::string& section, const std::string& key) const {
    return entry(section, key).value;
  }

  // Typed access; a malformed value raises ConfigError naming its origin.
  double real(const std::string& section, const std::string& key) const;
  std::int64_t integer(const std::string& section, const std::string& key) const;
  std::uint64_t unsigned_integer(const std::string& section, const std::string& key) const;
  bool boolean(const std::string& section, const std::string& key) const;

  // ConfigError for section.key, prefixed with the value's origin.
  [[noreturn]] void fail(const std::string& section, const std::string& key,
                         const std::string& message) const;

  // Every key in sorted order, one "section.key=value" per line. Two configs
  // with equal canonical text produce identical runs.
  std::string canonical() const;
  std::uint64_t hash() const;

 private:
  std::map<std::string, std::map<std::string, Entry>> values_;
};

}  // namespace cascadeq
