#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hyperlens {

// Exact arithmetic backbone: arbitrary-precision integers and canonical
// rationals. All closed-form statistics are computed in these types; doubles
// only appear in the sampling layers.
using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer int_pow(const Integer& base, unsigned exp) {
  return boost::multiprecision::pow(base, exp);
}

inline Rational rational_pow(const Rational& x, unsigned k) {
  Rational acc(1);
  Rational base = x;
  while (k != 0) {
    if (k & 1u) acc *= base;
    k >>= 1u;
    if (k != 0) base *= base;
  }
  return acc;
}

// b^e for integer b >= 1 and possibly negative integer e, as an exact rational.
inline Rational int_pow_rational(const Integer& base, long e) {
  if (e >= 0) return Rational(int_pow(base, static_cast<unsigned>(e)));
  return Rational(Integer(1), int_pow(base, static_cast<unsigned>(-e)));
}

// 2^e, e possibly negative.
inline Rational pow2_rational(long e) { return int_pow_rational(Integer(2), e); }

inline double to_double(const Rational& x) { return x.convert_to<double>(); }

// Largest r >= 0 with r^k <= x. Requires x >= 0, k >= 1.
inline Integer floor_kth_root(const Integer& x, unsigned k) {
  if (x < 0) throw std::invalid_argument("floor_kth_root: negative radicand");
  if (k == 0) throw std::invalid_argument("floor_kth_root: k must be >= 1");
  if (k == 1 || x < 2) return x;
  const unsigned bits = boost::multiprecision::msb(x) + 1;
  Integer lo = 1;
  Integer hi = Integer(1) << (bits / k + 1);
  while (lo < hi) {
    Integer mid = (lo + hi + 1) >> 1;
    if (int_pow(mid, k) <= x)
      lo = mid;
    else
      hi = mid - 1;
  }
  return lo;
}

// Exact k-th root when x is a perfect k-th power, nullopt otherwise.
inline std::optional<Integer> exact_kth_root(const Integer& x, unsigned k) {
  Integer r = floor_kth_root(x, k);
  if (int_pow(r, k) == x) return r;
  return std::nullopt;
}

// Parses "7", "-3/4" or a plain decimal like "0.25" (expanded exactly, so
// 0.33 means 33/100, not a binary double).
inline Rational parse_rational(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  const std::string s(text);
  try {
    if (auto slash = s.find('/'); slash != std::string::npos) {
      Integer num(s.substr(0, slash));
      Integer den(s.substr(slash + 1));
      if (den == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
      return Rational(num, den);
    }
    if (auto dot = s.find('.'); dot != std::string::npos) {
      bool neg = false;
      std::string head = s.substr(0, dot);
      std::string tail = s.substr(dot + 1);
      if (!head.empty() && (head[0] == '-' || head[0] == '+')) {
        neg = head[0] == '-';
        head.erase(0, 1);
      }
      Integer ip = head.empty() ? Integer(0) : Integer(head);
      Integer fp = tail.empty() ? Integer(0) : Integer(tail);
      if (ip < 0 || fp < 0) throw std::invalid_argument("malformed decimal '" + s + "'");
      Integer den = int_pow(Integer(10), static_cast<unsigned>(tail.size()));
      Rational value(ip * den + fp, den);
      return neg ? -value : value;
    }
    return Rational(Integer(s));
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("malformed rational literal '" + s + "'");
  }
}

inline std::string to_string(const Rational& x) { return x.str(); }

}  // namespace hyperlens
