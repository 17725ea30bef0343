#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace afem {

/// One `key = value` line. Values in double quotes are unquoted.
struct KeyValue {
  std::string key;
  std::string value;
  int line = 0;
};

/// Parses `key = value` lines; blank lines and `#` comments are skipped.
/// Duplicate keys are kept in order, callers decide what they mean.
std::vector<KeyValue> parse_key_values(std::string_view text);

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::string quote_value(std::string_view s);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

/// "%.16e": 17 significant digits, round-trips every double.
std::string format_real(double v);

/// Parses a decimal or a rational "p/q".
double parse_real(std::string_view s);

}  // namespace afem
