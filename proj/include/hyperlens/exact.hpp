#pragma once

// Closed-form distance statistics on the cube [0, N]^d, exact in rational
// arithmetic for any d >= 1, N >= 1 and any rational anchor a.
//
// Notation: <a> = a_1 + ... + a_d,  |a|^2 = a_1^2 + ... + a_d^2.
//
//   A_V  = mean of squared distances from a to the 2^d vertices
//        = d N^2 / 2 - <a> N + |a|^2
//   M2_V = mean squared deviation of those squared distances about A_V
//        = d N^4 / 4 - <a> N^3 + |a|^2 N^2
//   A_W  = mean of squared distances from a to the (N+1)^d lattice points
//        = d N (2N+1) / 6 - <a> N + |a|^2
//   M2_W = (4/45) d N^4 + (17d/90 - <a>/3) N^3
//          + (d/180 - (2/3)<a> + |a|^2/3) N^2 + (-d/30 + (2/3)|a|^2) N
//
// Sigma = sum over a population of dist^4(v, a) expands over coordinate index
// pairs (m, n) into nine monomial sums S1..S9 with S4 = S2, S7 = S3, S8 = S6,
// and Sigma = S1 - 2 S2 + S3 - 2 S4 + 4 S5 - 2 S6 + S7 - 2 S8 + S9.
// M2 = Sigma / #population - A^2 in both cases.
//
// The normalized mean B = A / (d N^2) depends on the anchor only through its
// normalized distance r to the cube center:
//   B_V = 1/4 + r^2          B_W = 1/12 + 1/(6N) + r^2
//
// Power-of-two and power-of-(N+1) prefactors are kept as exact rationals so
// the d = 1 case needs no special handling. Square roots never appear here;
// they belong to the floating-point layers.

#include "hyperlens/types.hpp"

#include <cmath>
#include <optional>
#include <string>

namespace hyperlens {

// 1^k + 2^k + ... + n^k for k in {1, 2, 3, 4}.
inline Integer power_sum(int k, const Integer& n) {
  if (n < 1) throw std::invalid_argument("power_sum: n must be >= 1");
  switch (k) {
    case 1:
      return n * (n + 1) / 2;
    case 2:
      return n * (n + 1) * (2 * n + 1) / 6;
    case 3: {
      Integer t = n * (n + 1) / 2;
      return t * t;
    }
    case 4:
      return n * (n + 1) * (2 * n + 1) * (3 * n * n + 3 * n - 1) / 30;
    default:
      throw std::invalid_argument("power_sum: k must be in {1,2,3,4}");
  }
}

inline Rational avg_sq_dist_vertices(const CubeSpec& spec, const Anchor& a) {
  require_anchor_dim(spec, a);
  const Rational N(spec.n);
  return Rational(spec.d) * N * N / 2 - a.coord_sum() * N + a.norm_sq();
}

inline SigmaTerms sigma_vertices(const CubeSpec& spec, const Anchor& a) {
  require_anchor_dim(spec, a);
  const long d = spec.d;
  const Rational N(spec.n);
  const Rational N2 = N * N, N3 = N2 * N, N4 = N2 * N2;
  const Rational half = pow2_rational(d - 1);     // vertices with one coordinate pinned
  const Rational quarter = pow2_rational(d - 2);  // vertices with two coordinates pinned
  const Rational full = pow2_rational(d);
  const Rational cs = a.coord_sum();
  const Rational ns = a.norm_sq();

  SigmaTerms out;
  out.s1 = N4 * (d * half + (Rational(d) * d - d) * quarter);
  out.s2 = N3 * (half * cs + (d - 1) * quarter * cs);
  out.s3 = N2 * d * half * ns;
  out.s4 = out.s2;
  out.s5 = N2 * (half * ns + quarter * (cs * cs - ns));
  out.s6 = N * half * cs * ns;
  out.s7 = out.s3;
  out.s8 = out.s6;
  out.s9 = full * ns * ns;
  out.total = out.signed_sum();
  return out;
}

inline Rational second_moment_vertices(const CubeSpec& spec, const Anchor& a) {
  require_anchor_dim(spec, a);
  const Rational N(spec.n);
  const Rational N2 = N * N;
  return Rational(spec.d) * N2 * N2 / 4 - a.coord_sum() * N2 * N + a.norm_sq() * N2;
}

inline Rational avg_sq_dist_lattice(const CubeSpec& spec, const Anchor& a) {
  require_anchor_dim(spec, a);
  const Rational N(spec.n);
  return Rational(spec.d) * N * (2 * N + 1) / 6 - a.coord_sum() * N + a.norm_sq();
}

inline SigmaTerms sigma_lattice(const CubeSpec& spec, const Anchor& a) {
  require_anchor_dim(spec, a);
  const long d = spec.d;
  const Integer N(spec.n);
  const Rational T1(power_sum(1, N)), T2(power_sum(2, N)), T3(power_sum(3, N)), T4(power_sum(4, N));
  const Integer M = N + 1;
  const Rational m1 = int_pow_rational(M, d - 1);
  const Rational m2 = int_pow_rational(M, d - 2);
  const Rational m0 = int_pow_rational(M, d);
  const Rational cs = a.coord_sum();
  const Rational ns = a.norm_sq();

  SigmaTerms out;
  out.s1 = d * m1 * T4 + (Rational(d) * d - d) * m2 * T2 * T2;
  out.s2 = cs * m1 * T3 + cs * (d - 1) * m2 * T1 * T2;
  out.s3 = ns * d * m1 * T2;
  out.s4 = out.s2;
  out.s5 = ns * m1 * T2 + (cs * cs - ns) * m2 * T1 * T1;
  out.s6 = cs * ns * m1 * T1;
  out.s7 = out.s3;
  out.s8 = out.s6;
  out.s9 = ns * ns * m0;
  out.total = out.signed_sum();
  return out;
}

inline Rational second_moment_lattice(const CubeSpec& spec, const Anchor& a) {
  require_anchor_dim(spec, a);
  const long d = spec.d;
  const Rational N(spec.n);
  const Rational N2 = N * N, N3 = N2 * N, N4 = N2 * N2;
  const Rational cs = a.coord_sum();
  const Rational ns = a.norm_sq();
  return Rational(4, 45) * d * N4 + (Rational(17, 90) * d - cs / 3) * N3 +
         (Rational(1, 180) * d - Rational(2, 3) * cs + ns / 3) * N2 +
         (Rational(-1, 30) * d + Rational(2, 3) * ns) * N;
}

// r_a^2: squared normalized distance from the anchor to the cube center.
inline Rational center_distance_sq(const CubeSpec& spec, const Anchor& a) {
  require_anchor_dim(spec, a);
  const Rational N(spec.n);
  const Rational dn2 = Rational(spec.d) * N * N;
  return (dn2 / 4 - a.coord_sum() * N + a.norm_sq()) / dn2;
}

inline MomentReport moment_report(const CubeSpec& spec, const Anchor& a, Population pop) {
  MomentReport r;
  r.population = pop;
  if (pop == Population::vertices) {
    r.average = avg_sq_dist_vertices(spec, a);
    r.second_moment = second_moment_vertices(spec, a);
  } else {
    r.average = avg_sq_dist_lattice(spec, a);
    r.second_moment = second_moment_lattice(spec, a);
  }
  const Rational dn2 = Rational(spec.d) * spec.n * spec.n;
  r.normalized_average = r.average / dn2;
  r.normalized_second_moment = r.second_moment / (dn2 * dn2);
  return r;
}

// d^e as an exact rational when e = p/q makes d^p a perfect q-th power.
inline std::optional<Rational> exact_int_power(long d, const Rational& e) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  const Integer p = numerator(e);
  const Integer q = denominator(e);
  const bool neg = p < 0;
  const Integer dp = int_pow(Integer(d), boost::multiprecision::abs(p).convert_to<unsigned>());
  auto root = exact_kth_root(dp, q.convert_to<unsigned>());
  if (!root) return std::nullopt;
  Rational r(*root);
  return neg ? Rational(1) / r : r;
}

// Decides x >= d^e exactly for rational x >= 0, rational e and integer d >= 1.
inline bool geq_int_power(const Rational& x, long d, const Rational& e) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  if (x < 0) throw std::invalid_argument("geq_int_power: x must be >= 0");
  const Integer p = numerator(e);
  const Integer q = denominator(e);  // >= 1
  const Rational lhs = rational_pow(x, q.convert_to<unsigned>());
  const Rational rhs = p >= 0
      ? Rational(int_pow(Integer(d), p.convert_to<unsigned>()))
      : Rational(Integer(1), int_pow(Integer(d), (-p).convert_to<unsigned>()));
  return lhs >= rhs;
}

// One concentration statement instantiated at (d, eta[, gamma]): the claimed
// proportion is at least 1 - c * d^(2 eta - 1), the inner interval has radius
// d^(-eta), and the ACV statement bounds |cos| by (sqrt(2)+1) d^(-gamma).
struct ConcentrationBound {
  TheoremId theorem = TheoremId::V1;
  long d = 0;
  Rational eta;
  std::optional<Rational> gamma;
  Rational constant;                    // c
  double value = 0;                     // 1 - c * d^(2 eta - 1)
  std::optional<Rational> exact;        // same, when d^(1-2 eta) is rational
  double half_width = 0;                // d^(-eta)
  std::optional<double> cos_threshold;  // (sqrt(2)+1) d^(-gamma)

  bool vacuous() const { return value <= 0.0; }
};

inline Rational theorem_constant(TheoremId id) {
  switch (id) {
    case TheoremId::V1:
    case TheoremId::ACV:
      return Rational(1);
    case TheoremId::VIsosceles:
      return Rational(2);
    case TheoremId::VSimilar:
      return Rational(3);
    case TheoremId::W1:
      return Rational(51, 15);
    case TheoremId::WIsosceles:
      return Rational(102, 15);
    case TheoremId::WSimilar:
      return Rational(102, 5);
  }
  return Rational(1);
}

inline int theorem_min_dimension(TheoremId id) {
  switch (id) {
    case TheoremId::VIsosceles:
      return 8;
    case TheoremId::VSimilar:
      return 6;
    default:
      return 2;
  }
}

// Validates the theorem-specific hypotheses exactly (integer comparisons, no
// floating point) and returns the bound. Vacuous bounds (<= 0 at small d) are
// returned, not rejected; only hard preconditions throw.
inline ConcentrationBound concentration_bound(TheoremId id, long d, const Rational& eta,
                                              std::optional<Rational> gamma = std::nullopt) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;

  if (!(eta > 0 && eta < Rational(1, 2)))
    throw PreconditionError(std::string(theorem_name(id)) + " requires 0 < eta < 1/2");
  if (id == TheoremId::ACV) {
    // d > 2^(1/eta)  <=>  d^p > 2^q  for eta = p/q
    if (!(int_pow(Integer(d), numerator(eta).convert_to<unsigned>()) >
          int_pow(Integer(2), denominator(eta).convert_to<unsigned>())))
      throw PreconditionError("ACV requires d > 2^(1/eta)");
    if (!gamma) throw PreconditionError("ACV requires gamma");
    if (!(*gamma > 0)) throw PreconditionError("ACV requires gamma > 0");
    // gamma <= eta - log(2)/log(d)  <=>  d^(eta-gamma) >= 2
    const Rational diff = eta - *gamma;
    if (!(diff > 0) ||
        !(int_pow(Integer(d), numerator(diff).convert_to<unsigned>()) >=
          int_pow(Integer(2), denominator(diff).convert_to<unsigned>())))
      throw PreconditionError("ACV requires gamma <= eta - log(2)/log(d)");
  } else if (d < theorem_min_dimension(id)) {
    throw PreconditionError(std::string(theorem_name(id)) + " requires d >= " +
                            std::to_string(theorem_min_dimension(id)));
  }

  ConcentrationBound b;
  b.theorem = id;
  b.d = d;
  b.eta = eta;
  b.gamma = gamma;
  b.constant = theorem_constant(id);

  const double dd = static_cast<double>(d);
  b.value = 1.0 - to_double(b.constant) * std::pow(dd, to_double(2 * eta - 1));
  b.half_width = std::pow(dd, -to_double(eta));
  if (auto p = exact_int_power(d, Rational(1) - 2 * eta)) b.exact = Rational(1) - b.constant / *p;
  if (id == TheoremId::ACV)
    b.cos_threshold = (std::sqrt(2.0) + 1.0) * std::pow(dd, -to_double(*gamma));
  return b;
}

// Decides proportion >= 1 - c d^(2 eta - 1) exactly for a rational proportion.
inline bool proportion_meets_bound(const Rational& proportion, const ConcentrationBound& b) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  const Rational shortfall = Rational(1) - proportion;
  if (shortfall <= 0) return true;
  // shortfall <= c d^(-(q-2p)/q)  <=>  shortfall^q d^(q-2p) <= c^q
  const Integer p = numerator(b.eta);
  const Integer q = denominator(b.eta);
  const unsigned uq = q.convert_to<unsigned>();
  const Integer e = q - 2 * p;  // > 0 since eta < 1/2
  return rational_pow(shortfall, uq) * Rational(int_pow(Integer(b.d), e.convert_to<unsigned>())) <=
         rational_pow(b.constant, uq);
}

}  // namespace hyperlens
