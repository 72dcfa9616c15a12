#pragma once

// Floating-point metric layer: normalized distances, the angle seen from the
// cube center, and the tolerance predicates behind each triangle event.
// Distances are scaled by 1/(sqrt(d) N) so the cube diameter is exactly 1.
// All interval tests are closed: boundary hits count.

#include "hyperlens/exact.hpp"
#include "hyperlens/types.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace hyperlens {

using FloatPoint = std::vector<double>;

namespace detail {
inline void check_point(const CubeSpec& spec, const FloatPoint& p, const char* where) {
  if (static_cast<int>(p.size()) != spec.d)
    throw std::invalid_argument(std::string(where) + ": point dimension " +
                                std::to_string(p.size()) + " != d=" + std::to_string(spec.d));
  for (double c : p)
    if (!std::isfinite(c)) throw std::invalid_argument(std::string(where) + ": non-finite coordinate");
}
}  // namespace detail

inline double normalized_distance(const CubeSpec& spec, const FloatPoint& p, const FloatPoint& q) {
  detail::check_point(spec, p, "normalized_distance");
  detail::check_point(spec, q, "normalized_distance");
  double s = 0;
  for (int j = 0; j < spec.d; ++j) {
    const double t = p[j] - q[j];
    s += t * t;
  }
  return std::sqrt(s) / (std::sqrt(static_cast<double>(spec.d)) * spec.n);
}

// Cosine of the angle at the center c = (N/2, ..., N/2) between the rays
// c -> a and c -> v. Clamped to [-1, 1] to absorb last-ulp drift.
inline double cos_angle_at_center(const CubeSpec& spec, const FloatPoint& a, const FloatPoint& v) {
  detail::check_point(spec, a, "cos_angle_at_center");
  detail::check_point(spec, v, "cos_angle_at_center");
  const double c = spec.n / 2.0;
  double dot = 0, na = 0, nv = 0;
  for (int j = 0; j < spec.d; ++j) {
    const double ua = a[j] - c;
    const double uv = v[j] - c;
    dot += ua * uv;
    na += ua * ua;
    nv += uv * uv;
  }
  if (na == 0 || nv == 0)
    throw std::domain_error("cos_angle_at_center: degenerate ray (point coincides with center)");
  return std::clamp(dot / std::sqrt(na * nv), -1.0, 1.0);
}

inline bool isosceles_test(const CubeSpec& spec, const FloatPoint& a, const FloatPoint& v1,
                           const FloatPoint& v2, double epsilon) {
  if (!(epsilon > 0)) throw std::invalid_argument("isosceles_test: epsilon must be > 0");
  return std::abs(normalized_distance(spec, a, v1) - normalized_distance(spec, a, v2)) <= epsilon;
}

// One evaluated triangle event: which condition set, at which tolerance, what
// was measured, and whether the event held. Degenerate triples (coincident
// points, detected by exact coordinate equality) are flagged, never counted.
struct TriangleEvent {
  enum class Kind { isoscelesV, similarV, rightAngleACV, isoscelesW, similarW };

  Kind kind = Kind::similarV;
  double eta = 0;
  double gamma = 0;  // rightAngleACV only
  bool satisfied = false;
  bool degenerate = false;
  double dist_a1 = 0;
  double dist_a2 = 0;
  double dist_12 = 0;
  double cosine = 0;  // rightAngleACV only
};

// Shared interval check for the two "similar" events: both anchor legs within
// half_width of anchor_target, mutual side within half_width of mutual_target.
inline bool similar_check(double dist_a1, double dist_a2, double dist_12, double anchor_target,
                          double mutual_target, double half_width) {
  return std::abs(dist_a1 - anchor_target) <= half_width &&
         std::abs(dist_a2 - anchor_target) <= half_width &&
         std::abs(dist_12 - mutual_target) <= half_width;
}

namespace detail {
inline TriangleEvent similar_event(TriangleEvent::Kind kind, const CubeSpec& spec,
                                   const FloatPoint& a, const FloatPoint& p1, const FloatPoint& p2,
                                   double eta, double anchor_target, double mutual_target) {
  TriangleEvent ev;
  ev.kind = kind;
  ev.eta = eta;
  if (p1 == p2 || p1 == a || p2 == a) {
    ev.degenerate = true;
    return ev;
  }
  const double hw = std::pow(static_cast<double>(spec.d), -eta);
  ev.dist_a1 = normalized_distance(spec, a, p1);
  ev.dist_a2 = normalized_distance(spec, a, p2);
  ev.dist_12 = normalized_distance(spec, p1, p2);
  ev.satisfied = similar_check(ev.dist_a1, ev.dist_a2, ev.dist_12, anchor_target, mutual_target, hw);
  return ev;
}

inline void check_eta(const Rational& eta) {
  if (!(eta > 0 && eta < Rational(1, 2)))
    throw std::invalid_argument("requires 0 < eta < 1/2");
}
}  // namespace detail

// Anchor legs near sqrt(B_V), mutual side near 1/sqrt(2). The anchor target
// comes from the exact layer and is rounded exactly once.
inline TriangleEvent similar_conditions_V(const CubeSpec& spec, const FloatPoint& a,
                                          const FloatPoint& v1, const FloatPoint& v2, double eta,
                                          double sqrt_b_vertices) {
  return detail::similar_event(TriangleEvent::Kind::similarV, spec, a, v1, v2, eta,
                               sqrt_b_vertices, 1.0 / std::numbers::sqrt2);
}

inline TriangleEvent similar_conditions_V(const CubeSpec& spec, const Anchor& a,
                                          const FloatPoint& v1, const FloatPoint& v2,
                                          const Rational& eta) {
  detail::check_eta(eta);
  const double sqrt_b = std::sqrt(to_double(avg_sq_dist_vertices(spec, a) /
                                            (Rational(spec.d) * spec.n * spec.n)));
  return similar_conditions_V(spec, a.to_doubles(), v1, v2, to_double(eta), sqrt_b);
}

// Anchor legs near sqrt(B_W), mutual side near sqrt(1/6 + 1/(3N)).
inline TriangleEvent similar_conditions_W(const CubeSpec& spec, const FloatPoint& a,
                                          const FloatPoint& w1, const FloatPoint& w2, double eta,
                                          double sqrt_b_lattice) {
  const double mutual = std::sqrt(1.0 / 6.0 + 1.0 / (3.0 * spec.n));
  return detail::similar_event(TriangleEvent::Kind::similarW, spec, a, w1, w2, eta,
                               sqrt_b_lattice, mutual);
}

inline TriangleEvent similar_conditions_W(const CubeSpec& spec, const Anchor& a,
                                          const FloatPoint& w1, const FloatPoint& w2,
                                          const Rational& eta) {
  detail::check_eta(eta);
  const double sqrt_b = std::sqrt(to_double(avg_sq_dist_lattice(spec, a) /
                                            (Rational(spec.d) * spec.n * spec.n)));
  return similar_conditions_W(spec, a.to_doubles(), w1, w2, to_double(eta), sqrt_b);
}

inline bool right_angle_test(const CubeSpec& spec, const FloatPoint& a, const FloatPoint& v,
                             double gamma) {
  if (!(gamma > 0)) throw std::invalid_argument("right_angle_test: gamma must be > 0");
  const double threshold = (std::numbers::sqrt2 + 1.0) * std::pow(static_cast<double>(spec.d), -gamma);
  return std::abs(cos_angle_at_center(spec, a, v)) <= threshold;
}

inline TriangleEvent right_angle_event(const CubeSpec& spec, const FloatPoint& a,
                                       const FloatPoint& v, double gamma) {
  if (!(gamma > 0)) throw std::invalid_argument("right_angle_event: gamma must be > 0");
  TriangleEvent ev;
  ev.kind = TriangleEvent::Kind::rightAngleACV;
  ev.gamma = gamma;
  if (a == v) {
    ev.degenerate = true;
    return ev;
  }
  ev.cosine = cos_angle_at_center(spec, a, v);
  const double threshold = (std::numbers::sqrt2 + 1.0) * std::pow(static_cast<double>(spec.d), -gamma);
  ev.satisfied = std::abs(ev.cosine) <= threshold;
  return ev;
}

}  // namespace hyperlens
