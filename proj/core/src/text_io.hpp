#pragma once

// Line-oriented tokenizing helpers shared by the TSV readers. Internal to
// the core library.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "slp/errors.hpp"

namespace slp::detail {

inline std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string() + " for reading");
  return in;
}

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

// Splits on tabs and spaces. Returns an empty vector for blank lines and
// '#' comments.
inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == '\t' || line[pos] == ' ')) ++pos;
    if (pos >= line.size()) break;
    if (fields.empty() && line[pos] == '#') break;
    std::size_t end = pos;
    while (end < line.size() && line[end] != '\t' && line[end] != ' ') ++end;
    fields.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return fields;
}

[[noreturn]] inline void fail_line(const std::filesystem::path& path, std::size_t line_no,
                                   const std::string& what) {
  throw ParseError(path.string() + ":" + std::to_string(line_no) + ": " + what);
}

template <typename T>
T parse_number(std::string_view field, const std::filesystem::path& path, std::size_t line_no) {
  T value{};
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (!field.empty() && field.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    fail_line(path, line_no, "cannot parse '" + std::string(field) + "' as a number");
  }
  return value;
}

inline std::string format_double(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

// Reads every non-blank line, hands (line number, fields) to `on_row`.
template <typename Fn>
void for_each_row(const std::filesystem::path& path, std::size_t expected_fields, Fn&& on_row) {
  auto in = open_input(path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() != expected_fields) {
      fail_line(path, line_no,
                "expected " + std::to_string(expected_fields) + " fields, found " +
                    std::to_string(fields.size()));
    }
    on_row(line_no, fields);
  }
}

}  // namespace slp::detail
