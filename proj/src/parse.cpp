#include "limsup/parse.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

#include "limsup/errors.hpp"

namespace limsup {

namespace {

double parse_plain(std::string_view text) {
  const std::string s(text);
  if (s.empty()) throw DomainError("empty number");
  // strtod is locale-aware but the tools never change the C locale
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || std::isspace(static_cast<unsigned char>(s.front()))) {
    throw DomainError("not a number: '" + s + "'");
  }
  if (!std::isfinite(v)) throw DomainError("not a finite number: '" + s + "'");
  return v;
}

}  // namespace

std::string trim(std::string_view text) {
  std::size_t a = 0, b = text.size();
  while (a < b && std::isspace(static_cast<unsigned char>(text[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(text[b - 1]))) --b;
  return std::string(text.substr(a, b - a));
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = text.find(sep, start);
    out.push_back(trim(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(std::string_view text) {
  const std::string t = trim(text);
  const auto slash = t.find('/');
  if (slash == std::string::npos) return parse_plain(t);
  const double q = parse_plain(t.substr(slash + 1));
  if (q == 0.0) throw DomainError("zero denominator in '" + t + "'");
  return parse_plain(t.substr(0, slash)) / q;
}

std::uint64_t parse_uint(std::string_view text) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    // allow 1e5-style integers
    const double d = parse_plain(t);
    if (d < 0.0 || d != std::floor(d) || d >= 0x1.0p64) throw DomainError("not a non-negative integer: '" + t + "'");
    return static_cast<std::uint64_t>(d);
  }
  return v;
}

std::vector<double> parse_double_list(std::string_view text, char sep) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  for (const std::string& item : split(text, sep)) out.push_back(parse_double(item));
  return out;
}

std::vector<std::uint64_t> parse_uint_list(std::string_view text, char sep) {
  std::vector<std::uint64_t> out;
  if (trim(text).empty()) return out;
  for (const std::string& item : split(text, sep)) out.push_back(parse_uint(item));
  return out;
}

}  // namespace limsup
