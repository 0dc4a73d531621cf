#include "cascadeq/text.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <system_error>

#include "cascadeq/error.hpp"

namespace cascadeq {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), result.ptr);
}

std::string_view trim(std::string_view text) noexcept {
  constexpr std::string_view ws = " \t\r\n";
  const auto first = text.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(ws);
  return text.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view text, char delimiter) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(delimiter, start);
    if (pos == std::string_view::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_double(std::string_view text) {
  const auto t = trim(text);
  if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
  if (t == "-inf") return -std::numeric_limits<double>::infinity();
  double value = 0.0;
  const char* begin = t.data();
  if (!t.empty() && t.front() == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, t.data() + t.size(), value);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size())
    throw InvalidInput("expected a number, got '" + std::string(text) + "'");
  return value;
}

std::int64_t parse_int(std::string_view text) {
  const auto t = trim(text);
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
    // Accept integral values written in floating-point form, e.g. 1e5.
    const double d = parse_double(t);
    if (d != std::floor(d) || std::abs(d) > 9.0e15)
      throw InvalidInput("expected an integer, got '" + std::string(text) + "'");
    return static_cast<std::int64_t>(d);
  }
  return value;
}

std::uint64_t parse_uint(std::string_view text) {
  const auto t = trim(text);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
    const auto v = parse_int(t);
    if (v < 0)
      throw InvalidInput("expected a nonnegative integer, got '" + std::string(text) + "'");
    return static_cast<std::uint64_t>(v);
  }
  return value;
}

bool parse_bool(std::string_view text) {
  const auto t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw InvalidInput("expected a boolean, got '" + std::string(text) + "'");
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::string_view schema, int version,
                     std::initializer_list<std::string_view> columns)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc), columns_(columns.size()) {
  if (!out_) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out_ << "# cascadeq " << schema << " v" << version << '\n';
  bool first = true;
  for (auto c : columns) {
    if (!first) out_ << ',';
    out_ << c;
    first = false;
  }
  out_ << '\n';
}

void CsvWriter::separate() {
  if (field_ > 0) out_ << ',';
  ++field_;
}

CsvWriter& CsvWriter::operator<<(double value) {
  separate();
  out_ << format_double(value);
  return *this;
}

CsvWriter& CsvWriter::operator<<(std::int64_t value) {
  separate();
  out_ << value;
  return *this;
}

CsvWriter& CsvWriter::operator<<(std::string_view value) {
  separate();
  out_ << value;
  return *this;
}

void CsvWriter::end_row() {
  if (field_ != columns_)
    throw std::logic_error("CSV row for " + path_.string() + " has " + std::to_string(field_) +
                           " fields, expected " + std::to_string(columns_));
  out_ << '\n';
  field_ = 0;
}

int CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path.string());
  CsvTable table;
  std::string line;
  int line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::vector<std::string> fields;
    for (auto f : split(t, ',')) fields.emplace_back(trim(f));
    if (!have_header) {
      have_header = true;
      const bool numeric = std::all_of(fields.begin(), fields.end(), [](const std::string& f) {
        try {
          parse_double(f);
          return true;
        } catch (const InvalidInput&) {
          return false;
        }
      });
      if (!numeric) {
        table.header = std::move(fields);
        continue;
      }
    }
    table.rows.push_back(std::move(fields));
    table.row_lines.push_back(line_no);
  }
  return table;
}

}  // namespace cascadeq
