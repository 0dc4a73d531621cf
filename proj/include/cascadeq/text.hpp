#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace cascadeq {

// Shortest representation that round-trips to the same double. Locale
// independent.
std::string format_double(double value);

// Strict, locale-independent parsers; throw InvalidInput on trailing junk.
double parse_double(std::string_view text);
std::int64_t parse_int(std::string_view text);
std::uint64_t parse_uint(std::string_view text);
bool parse_bool(std::string_view text);

std::string_view trim(std::string_view text) noexcept;
std::vector<std::string_view> split(std::string_view text, char delimiter);

// 64-bit FNV-1a, used for config fingerprints in run manifests.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

// CSV output with a versioned schema comment as the first line:
//   # cascadeq <schema> v<version>
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::string_view schema, int version,
            std::initializer_list<std::string_view> columns);

  CsvWriter& operator<<(double value);
  CsvWriter& operator<<(std::int64_t value);
  CsvWriter& operator<<(int value) { return *this << static_cast<std::int64_t>(value); }
  CsvWriter& operator<<(std::size_t value) {
    return *this << static_cast<std::int64_t>(value);
  }
  CsvWriter& operator<<(std::string_view value);
  CsvWriter& operator<<(const char* value) { return *this << std::string_view(value); }
  void end_row();

  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  void separate();

  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_;
  std::size_t field_ = 0;
};

// Reads a CSV file, skipping '#' comment lines. The first non-comment line is
// the header.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> row_lines;  // 1-based source line of each row

  // Index of a named column, or -1.
  int column(std::string_view name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

}  // namespace cascadeq
