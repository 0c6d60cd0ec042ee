#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace emg {

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char delim);

// Whole-string parse; nullopt on trailing garbage or empty input.
std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

// Shortest decimal form that parses back to the same double.
std::string format_number(double v);

}  // namespace emg
