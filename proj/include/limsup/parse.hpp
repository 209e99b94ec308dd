#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace limsup {

// Strict text-to-number conversions; DomainError on anything that is not a
// complete, finite number. Doubles accept "p/q" fractions.
double parse_double(std::string_view text);
std::uint64_t parse_uint(std::string_view text);
std::vector<double> parse_double_list(std::string_view text, char sep = ',');
std::vector<std::uint64_t> parse_uint_list(std::string_view text, char sep = ',');
std::vector<std::string> split(std::string_view text, char sep);
std::string trim(std::string_view text);

}  // namespace limsup
