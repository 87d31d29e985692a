#pragma once

#include <boost/rational.hpp>

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

#include "consensus/error.hpp"

namespace consensus {

/// Vote counts. Signed so that counts combine with Rational without casts;
/// every public operation rejects negative values.
using Count = std::int64_t;

using Rational = boost::rational<std::int64_t>;

inline std::string to_string(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline double to_double(const Rational& r) {
  return boost::rational_cast<double>(r);
}

/// Fixed 6-decimal rendering. Display only; never used in decisions.
inline std::string to_decimal(const Rational& r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", to_double(r));
  return buf;
}

namespace detail {

inline bool parse_int(std::string_view text, std::int64_t& out) {
  if (text.empty()) return false;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

}  // namespace detail

/// Parses "p/q" or an integer "p". Decimal notation is refused so that
/// thresholds never carry binary rounding.
inline Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  std::int64_t num = 0;
  std::int64_t den = 1;
  const bool ok = slash == std::string_view::npos
                      ? detail::parse_int(text, num)
                      : detail::parse_int(text.substr(0, slash), num) &&
                            detail::parse_int(text.substr(slash + 1), den);
  if (!ok || den == 0) {
    detail::fail(ErrorCode::InvalidParameter,
                 "not an exact rational: '" + std::string(text) + "'");
  }
  return Rational(num, den);
}

/// Smallest integer >= r.
inline std::int64_t ceil(const Rational& r) {
  const auto n = r.numerator();
  const auto d = r.denominator();  // always positive after normalization
  return n >= 0 ? (n + d - 1) / d : -((-n) / d);
}

}  // namespace consensus
