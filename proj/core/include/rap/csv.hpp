#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace rap {

/// Shortest round-trip decimal form of a double ("%.17g"-equivalent, locale independent).
std::string format_double(double v);
double parse_double(std::string_view text);

std::string join_csv(const std::vector<std::string>& fields);
std::vector<std::string> split_csv(std::string_view line);

/// Non-comment, non-empty lines ('#' starts a comment line).
std::vector<std::string> data_lines(std::string_view text);

}  // namespace rap
