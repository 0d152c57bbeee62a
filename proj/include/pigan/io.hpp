#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace pigan::io {

// Shortest representation that parses back to the same double. Infinities
// and NaN come out as "inf" / "-inf" / "nan".
std::string format_double(double v);

// Strict full-string parse; accepts what format_double emits.
double parse_double(std::string_view s);

std::vector<std::string> split(std::string_view line, char sep);

std::vector<std::string> read_lines(const std::string& path);
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace pigan::io
