#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace nfg {

/// Exact arbitrary-precision rational. Always kept in lowest terms with a
/// positive denominator; every operation in the library is exact.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

inline Rational rat(long long num, long long den = 1) {
  if (den == 0) throw std::invalid_argument("rational: zero denominator");
  return Rational(Integer(num), Integer(den));
}

/// Parses "num/den" or a plain integer. Whitespace is not accepted.
inline Rational parse_rational(std::string_view text) {
  auto bad = [&](const char* why) {
    throw std::invalid_argument("malformed rational '" + std::string(text) + "': " + why);
  };
  if (text.empty()) bad("empty");
  auto parse_int = [&](std::string_view s) -> Integer {
    if (s.empty()) bad("missing digits");
    std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (start == s.size()) bad("missing digits");
    for (std::size_t k = start; k < s.size(); ++k)
      if (s[k] < '0' || s[k] > '9') bad("invalid character");
    return Integer(std::string(s));
  };
  std::size_t slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  Integer num = parse_int(text.substr(0, slash));
  Integer den = parse_int(text.substr(slash + 1));
  if (den == 0) bad("zero denominator");
  return Rational(num, den);
}

/// Lowest-terms text form: "3", "-1/2".
inline std::string format_rational(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

inline Rational rational_abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

}  // namespace nfg
