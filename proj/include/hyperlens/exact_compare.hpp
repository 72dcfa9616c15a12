#pragma once

// Exact decisions for the interval tests the enumeration oracle counts.
// The thresholds are q-th roots of rationals (d^(-eta) with eta = p/q, or
// 2 d^(-eta)), so every test below reduces to rational comparisons after
// clearing the radical by raising to the q-th power. No floating point.

#include "hyperlens/rational.hpp"

#include <stdexcept>
#include <utility>

namespace hyperlens {

// Decides |sqrt(x) - sqrt(y)| <= t for rationals x, y >= 0 and a threshold
// t >= 0 supplied by its q-th power t_pow_q = t^q.
//
// Squaring once gives  g - 2 sqrt(pr) <= t^2  with g = x + y, pr = x y, whose
// left side is >= 0. Raising both sides to the q-th power keeps the order and
// expands the left side in the ring Z[sqrt(pr)] as A - B sqrt(pr) with
// A, B >= 0. The remaining comparison against the rational (t^q)^2 needs at
// most one more squaring.
inline bool sqrt_diff_within(const Rational& x, const Rational& y, const Rational& t_pow_q,
                             unsigned q) {
  if (x < 0 || y < 0) throw std::invalid_argument("sqrt_diff_within: radicands must be >= 0");
  if (t_pow_q < 0 || q == 0) throw std::invalid_argument("sqrt_diff_within: bad threshold");
  const Rational g = x + y;
  const Rational pr = x * y;
  Rational a(1), b(0);
  for (unsigned i = 0; i < q; ++i) {
    Rational a2 = a * g + 2 * b * pr;
    Rational b2 = 2 * a + b * g;
    a = std::move(a2);
    b = std::move(b2);
  }
  const Rational rhs = t_pow_q * t_pow_q;
  const Rational delta = a - rhs;
  if (delta <= 0) return true;
  return delta * delta <= b * b * pr;
}

// Decides sqrt(x) <= (1 + sqrt(2)) s for rational x >= 0 and s >= 0 supplied
// by s_pow_q = s^q. Used for |cos| <= (sqrt(2)+1) d^(-gamma) with x = cos^2.
//
// Since (3 + 2 sqrt(2))(3 - 2 sqrt(2)) = 1, the test is equivalent to
// x (3 - 2 sqrt(2)) <= s^2; the left side is >= 0 and its q-th power expands
// in Z[sqrt(2)] as A - B sqrt(2) with A, B >= 0.
inline bool sqrt_leq_silver_root(const Rational& x, const Rational& s_pow_q, unsigned q) {
  if (x < 0) throw std::invalid_argument("sqrt_leq_silver_root: radicand must be >= 0");
  if (s_pow_q < 0 || q == 0) throw std::invalid_argument("sqrt_leq_silver_root: bad threshold");
  const Rational a0 = 3 * x;
  const Rational b0 = 2 * x;
  Rational a(1), b(0);
  for (unsigned i = 0; i < q; ++i) {
    Rational a2 = a * a0 + 2 * b * b0;
    Rational b2 = a * b0 + b * a0;
    a = std::move(a2);
    b = std::move(b2);
  }
  const Rational rhs = s_pow_q * s_pow_q;
  const Rational delta = a - rhs;
  if (delta <= 0) return true;
  return delta * delta <= 2 * b * b;
}

}  // namespace hyperlens
