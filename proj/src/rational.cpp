#include "kserver/rational.hpp"

#include "kserver/error.hpp"

#include <cctype>
#include <cmath>

namespace kserver {

namespace {

bool is_integer_text(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

Integer parse_integer(std::string_view s) {
  if (s.front() == '+') s.remove_prefix(1);
  return Integer(std::string(s));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  const auto slash = text.find('/');
  const auto num = text.substr(0, slash);
  if (!is_integer_text(num)) {
    throw Error(ErrorCode::Parse, "not a rational: '" + std::string(text) + "'");
  }
  if (slash == std::string_view::npos) return Rational(parse_integer(num));
  const auto den = text.substr(slash + 1);
  if (!is_integer_text(den)) {
    throw Error(ErrorCode::Parse, "not a rational: '" + std::string(text) + "'");
  }
  const Integer d = parse_integer(den);
  if (d == 0) throw Error(ErrorCode::Parse, "zero denominator in '" + std::string(text) + "'");
  return Rational(parse_integer(num), d);
}

std::string format_rational(const Rational& value) { return value.str(); }

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) throw Error(ErrorCode::InvalidArgument, "non-finite value");
  // mpq assignment from double is exact.
  return Rational(value);
}

}  // namespace kserver
