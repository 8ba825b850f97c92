#pragma once

// Small helpers shared by the text file formats: shortest round-trip
// number formatting, locale-independent parsing, whitespace tokenizing.

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace ics {

/// Shortest decimal form that parses back to the identical double.
std::string format_double(double value);

/// Parses a complete token as a finite double; `line` is used in the error.
double parse_double(std::string_view token, std::size_t line);
std::int64_t parse_int(std::string_view token, std::size_t line);
std::uint64_t parse_uint(std::string_view token, std::size_t line);

std::vector<std::string_view> split_whitespace(std::string_view text);
std::vector<std::string_view> split_on(std::string_view text, char sep);

/// Opens for reading / writing or throws IoError naming the path.
std::ifstream open_input(const std::string& path);
std::ofstream open_output(const std::string& path);

/// Line reader that tracks 1-based line numbers and strips a trailing '\r'.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  /// False at end of stream.
  bool next(std::string& line);
  std::size_t line_number() const noexcept { return line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
};

}  // namespace ics
