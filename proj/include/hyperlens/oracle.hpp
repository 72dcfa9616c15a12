#pragma once

// Exhaustive ground truth at small (d, N). Everything here is computed from
// the defining sums by walking the whole population, never from the closed
// forms it is used to check. Anchors are cleared to a common denominator q so
// the sums accumulate in exact integers; event counts use the exact radical
// comparisons from exact_compare.hpp.

#include "hyperlens/exact.hpp"
#include "hyperlens/exact_compare.hpp"
#include "hyperlens/types.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hyperlens {

struct EnumerationBudget {
  Integer max_points = Integer(1) << 20;
  Integer max_pairs = Integer(1) << 26;
};

// Streams every population member exactly once, in lexicographic coordinate
// order. Refuses to start past the point budget.
class PointEnumerator {
 public:
  PointEnumerator(const CubeSpec& spec, Population pop, const EnumerationBudget& budget = {})
      : spec_(spec), pop_(pop), size_(spec.population_count(pop)) {
    if (budget.max_points < 1 || budget.max_pairs < 1)
      throw std::invalid_argument("enumeration budget must be positive");
    if (size_ > budget.max_points)
      throw BudgetError(std::string(population_name(pop)) + " enumeration needs " + size_.str() +
                        " points but the budget allows " + budget.max_points.str());
  }

  bool next(std::vector<int>& out) {
    if (done_) return false;
    if (!started_) {
      digits_.assign(static_cast<size_t>(spec_.d), 0);
      started_ = true;
    } else {
      const int top = pop_ == Population::vertices ? 1 : spec_.n;
      int j = spec_.d - 1;
      while (j >= 0 && digits_[static_cast<size_t>(j)] == top) {
        digits_[static_cast<size_t>(j)] = 0;
        --j;
      }
      if (j < 0) {
        done_ = true;
        return false;
      }
      ++digits_[static_cast<size_t>(j)];
    }
    out.resize(static_cast<size_t>(spec_.d));
    if (pop_ == Population::vertices) {
      for (int j = 0; j < spec_.d; ++j)
        out[static_cast<size_t>(j)] = digits_[static_cast<size_t>(j)] != 0 ? spec_.n : 0;
    } else {
      for (int j = 0; j < spec_.d; ++j) out[static_cast<size_t>(j)] = digits_[static_cast<size_t>(j)];
    }
    return true;
  }

  const Integer& size() const { return size_; }

 private:
  CubeSpec spec_;
  Population pop_;
  Integer size_;
  std::vector<int> digits_;
  bool started_ = false;
  bool done_ = false;
};

namespace detail {

// Anchor coordinates brought to a common denominator: a_j = p[j] / q.
struct ScaledAnchor {
  Integer q = 1;
  std::vector<Integer> p;
};

inline ScaledAnchor scale_anchor(const Anchor& a) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::lcm;
  using boost::multiprecision::numerator;
  ScaledAnchor sa;
  for (const auto& c : a.coords) sa.q = lcm(sa.q, denominator(c));
  sa.p.reserve(a.coords.size());
  for (const auto& c : a.coords) sa.p.push_back(numerator(c) * (sa.q / denominator(c)));
  return sa;
}

// sum_j (q v_j - p_j)^2, i.e. q^2 * dist^2(v, a).
inline Integer scaled_dist_sq(const std::vector<int>& v, const ScaledAnchor& sa) {
  Integer s(0);
  for (size_t j = 0; j < v.size(); ++j) {
    Integer t = sa.q * v[j] - sa.p[j];
    s += t * t;
  }
  return s;
}

}  // namespace detail

// Average and second moment straight from their definitions: one pass for the
// mean, a second pass for the squared deviations about it.
inline MomentReport brute_moments(const CubeSpec& spec, Population pop, const Anchor& a,
                                  const EnumerationBudget& budget = {}) {
  require_anchor_dim(spec, a);
  const auto sa = detail::scale_anchor(a);
  const Integer q2 = sa.q * sa.q;

  Integer sum(0), count(0);
  std::vector<int> v;
  PointEnumerator first(spec, pop, budget);
  while (first.next(v)) {
    sum += detail::scaled_dist_sq(v, sa);
    ++count;
  }

  Integer dev_sq_sum(0);
  PointEnumerator second(spec, pop, budget);
  while (second.next(v)) {
    const Integer dev = count * detail::scaled_dist_sq(v, sa) - sum;
    dev_sq_sum += dev * dev;
  }

  MomentReport r;
  r.population = pop;
  r.average = Rational(sum, count * q2);
  r.second_moment = Rational(dev_sq_sum, count * count * count * q2 * q2);
  const Rational dn2 = Rational(spec.d) * spec.n * spec.n;
  r.normalized_average = r.average / dn2;
  r.normalized_second_moment = r.second_moment / (dn2 * dn2);
  return r;
}

// All nine monomial sums evaluated as literal triple sums over the population
// and the index pairs (m, n). Each of the nine is accumulated independently;
// the S4=S2, S7=S3, S8=S6 identities are left for it to demonstrate.
inline SigmaTerms brute_sigma(const CubeSpec& spec, Population pop, const Anchor& a,
                              const EnumerationBudget& budget = {}) {
  require_anchor_dim(spec, a);
  const auto sa = detail::scale_anchor(a);
  const size_t d = static_cast<size_t>(spec.d);

  std::vector<Integer> pp(d);
  for (size_t j = 0; j < d; ++j) pp[j] = sa.p[j] * sa.p[j];

  Integer t1(0), t2(0), t3(0), t4(0), t5(0), t6(0), t7(0), t8(0), t9(0);
  std::vector<Integer> vv(d), vp(d);
  std::vector<int> v;
  PointEnumerator en(spec, pop, budget);
  while (en.next(v)) {
    for (size_t j = 0; j < d; ++j) {
      vv[j] = Integer(v[j]) * v[j];
      vp[j] = Integer(v[j]) * sa.p[j];
    }
    for (size_t m = 0; m < d; ++m) {
      for (size_t n = 0; n < d; ++n) {
        t1 += vv[m] * vv[n];
        t2 += vv[m] * vp[n];
        t3 += vv[m] * pp[n];
        t4 += vp[m] * vv[n];
        t5 += vp[m] * vp[n];
        t6 += vp[m] * pp[n];
        t7 += pp[m] * vv[n];
        t8 += pp[m] * vp[n];
        t9 += pp[m] * pp[n];
      }
    }
  }

  const Integer q = sa.q, q2 = q * q, q3 = q2 * q, q4 = q2 * q2;
  SigmaTerms out;
  out.s1 = Rational(t1);
  out.s2 = Rational(t2, q);
  out.s3 = Rational(t3, q2);
  out.s4 = Rational(t4, q);
  out.s5 = Rational(t5, q2);
  out.s6 = Rational(t6, q3);
  out.s7 = Rational(t7, q2);
  out.s8 = Rational(t8, q3);
  out.s9 = Rational(t9, q4);
  out.total = out.signed_sum();
  return out;
}

namespace detail {

// Normalized squared distance from the anchor to an integer point, exact.
inline Rational normalized_dist_sq(const CubeSpec& spec, const ScaledAnchor& sa,
                                   const std::vector<int>& v) {
  return Rational(scaled_dist_sq(v, sa), sa.q * sa.q * spec.d * spec.n * spec.n);
}

// Memoized |sqrt(x) - sqrt(y)| <= t test; oracle event loops hit very few
// distinct distance values, so this collapses the pair loops.
class SqrtDiffMemo {
 public:
  SqrtDiffMemo(Rational t_pow_q, unsigned q) : t_pow_q_(std::move(t_pow_q)), q_(q) {}

  bool operator()(const Rational& x, const Rational& y) {
    auto key = x <= y ? std::make_pair(x, y) : std::make_pair(y, x);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const bool hit = sqrt_diff_within(key.first, key.second, t_pow_q_, q_);
    cache_.emplace(std::move(key), hit);
    return hit;
  }

 private:
  Rational t_pow_q_;
  unsigned q_;
  std::map<std::pair<Rational, Rational>, bool> cache_;
};

inline std::vector<std::vector<int>> collect_points(const CubeSpec& spec, Population pop,
                                                    const EnumerationBudget& budget) {
  PointEnumerator en(spec, pop, budget);
  const Integer pair_count = en.size() * en.size();
  if (pair_count > budget.max_pairs)
    throw BudgetError("pair enumeration needs " + pair_count.str() +
                      " ordered pairs but the budget allows " + budget.max_pairs.str());
  std::vector<std::vector<int>> pts;
  std::vector<int> v;
  while (en.next(v)) pts.push_back(v);
  return pts;
}

}  // namespace detail

// Exact event proportion for one concentration statement: the count of
// population members (or ordered pairs of distinct members, both distinct
// from the anchor) satisfying the event, over the exact total. All interval
// membership decisions are exact.
inline Rational brute_theorem_proportion(TheoremId id, const CubeSpec& spec, const Anchor& a,
                                         const Rational& eta,
                                         std::optional<Rational> gamma = std::nullopt,
                                         const EnumerationBudget& budget = {}) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  require_anchor_dim(spec, a);
  concentration_bound(id, spec.d, eta, gamma);  // hypothesis checks only

  const auto sa = detail::scale_anchor(a);
  const unsigned ep = numerator(eta).convert_to<unsigned>();
  const unsigned eq = denominator(eta).convert_to<unsigned>();
  // (d^-eta)^q and (2 d^-eta)^q
  const Rational hw_pow_q(Integer(1), int_pow(Integer(spec.d), ep));
  const Rational double_hw_pow_q(int_pow(Integer(2), eq), int_pow(Integer(spec.d), ep));

  const Population pop = theorem_population(id);

  if (id == TheoremId::V1 || id == TheoremId::W1) {
    const Rational b = moment_report(spec, a, pop).normalized_average;
    detail::SqrtDiffMemo within(hw_pow_q, eq);
    Integer hits(0), total(0);
    std::vector<int> v;
    PointEnumerator en(spec, pop, budget);
    while (en.next(v)) {
      ++total;
      if (within(detail::normalized_dist_sq(spec, sa, v), b)) ++hits;
    }
    return Rational(hits, total);
  }

  if (id == TheoremId::ACV) {
    const Rational ra2 = center_distance_sq(spec, a);
    const Rational exponent = 2 * (*gamma - eta);
    if (!geq_int_power(ra2, spec.d, exponent))
      throw PreconditionError("ACV requires dist_d(a, c) >= d^(gamma - eta)");
    const unsigned gp = numerator(*gamma).convert_to<unsigned>();
    const unsigned gq = denominator(*gamma).convert_to<unsigned>();
    const Rational thr_pow_q(Integer(1), int_pow(Integer(spec.d), gp));  // (d^-gamma)^q

    // Scale both rays by 2q: the anchor ray becomes 2p_j - qN, the vertex ray
    // 2 v_j - N (q cancels in the cosine).
    std::vector<Integer> ua(static_cast<size_t>(spec.d));
    Integer su(0);
    for (size_t j = 0; j < ua.size(); ++j) {
      ua[j] = 2 * sa.p[j] - sa.q * spec.n;
      su += ua[j] * ua[j];
    }
    if (su == 0) throw PreconditionError("ACV requires an anchor distinct from the center");

    std::map<Rational, bool> memo;
    Integer hits(0), total(0);
    std::vector<int> v;
    PointEnumerator en(spec, Population::vertices, budget);
    while (en.next(v)) {
      if (a.equals_point(v)) continue;
      ++total;
      Integer dot(0), sw(0);
      for (size_t j = 0; j < v.size(); ++j) {
        const Integer uv = 2 * v[j] - spec.n;
        dot += ua[j] * uv;
        sw += uv * uv;
      }
      const Rational cos_sq(dot * dot, su * sw);
      auto it = memo.find(cos_sq);
      bool ok;
      if (it != memo.end()) {
        ok = it->second;
      } else {
        ok = sqrt_leq_silver_root(cos_sq, thr_pow_q, gq);
        memo.emplace(cos_sq, ok);
      }
      if (ok) ++hits;
    }
    if (total == 0) throw std::domain_error("ACV oracle: no vertices distinct from the anchor");
    return Rational(hits, total);
  }

  // Pair statements. Cache the per-point anchor distances, then walk ordered
  // pairs of distinct points that are also distinct from the anchor.
  const auto points = detail::collect_points(spec, pop, budget);
  const size_t npts = points.size();
  std::vector<Rational> dist_sq(npts);
  std::vector<char> is_anchor(npts, 0);
  for (size_t i = 0; i < npts; ++i) {
    dist_sq[i] = detail::normalized_dist_sq(spec, sa, points[i]);
    is_anchor[i] = a.equals_point(points[i]) ? 1 : 0;
  }

  const bool similar = id == TheoremId::VSimilar || id == TheoremId::WSimilar;
  detail::SqrtDiffMemo legs_within(hw_pow_q, eq);
  detail::SqrtDiffMemo iso_within(double_hw_pow_q, eq);

  std::vector<char> leg_ok;
  Rational mutual_target_sq;
  if (similar) {
    const Rational b = moment_report(spec, a, pop).normalized_average;
    leg_ok.resize(npts);
    for (size_t i = 0; i < npts; ++i) leg_ok[i] = legs_within(dist_sq[i], b) ? 1 : 0;
    mutual_target_sq = pop == Population::vertices
                           ? Rational(1, 2)
                           : Rational(1, 6) + Rational(1, 3 * Integer(spec.n));
  }

  detail::SqrtDiffMemo mutual_within(hw_pow_q, eq);
  const Integer mutual_den = Integer(spec.d) * spec.n * spec.n;

  Integer hits(0), total(0);
  for (size_t i = 0; i < npts; ++i) {
    if (is_anchor[i]) continue;
    for (size_t j = 0; j < npts; ++j) {
      if (j == i || is_anchor[j]) continue;
      ++total;
      bool ok;
      if (similar) {
        ok = leg_ok[i] && leg_ok[j];
        if (ok) {
          Integer ss(0);
          for (size_t k = 0; k < points[i].size(); ++k) {
            const Integer t = Integer(points[i][k]) - points[j][k];
            ss += t * t;
          }
          ok = mutual_within(Rational(ss, mutual_den), mutual_target_sq);
        }
      } else {
        ok = iso_within(dist_sq[i], dist_sq[j]);
      }
      if (ok) ++hits;
    }
  }
  if (total == 0)
    throw std::domain_error(std::string(theorem_name(id)) + " oracle: no non-degenerate pairs");
  return Rational(hits, total);
}

}  // namespace hyperlens
