#pragma once

#include "hyperlens/rational.hpp"

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hyperlens {

// Thrown when a concentration statement's stated hypothesis is not met
// (dimension floors, eta/gamma ranges, anchor placement).
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown when an exhaustive enumeration would exceed its budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Population { vertices, lattice };

inline const char* population_name(Population p) {
  return p == Population::vertices ? "vertices" : "lattice";
}

inline std::optional<Population> parse_population(std::string_view s) {
  if (s == "vertices") return Population::vertices;
  if (s == "lattice") return Population::lattice;
  return std::nullopt;
}

// The cube [0, N]^d. V is its 2^d corners (coordinates in {0, N}), W the
// (N+1)^d integer points it contains.
struct CubeSpec {
  int d;
  int n;

  CubeSpec(int dim, int side) : d(dim), n(side) {
    if (dim < 1) throw std::invalid_argument("CubeSpec: d must be >= 1");
    if (side < 1) throw std::invalid_argument("CubeSpec: N must be >= 1");
  }

  Integer vertex_count() const { return Integer(1) << d; }
  Integer lattice_count() const { return int_pow(Integer(n) + 1, static_cast<unsigned>(d)); }
  Integer population_count(Population p) const {
    return p == Population::vertices ? vertex_count() : lattice_count();
  }
};

// The fixed reference point distances are measured from. Coordinates are
// exact rationals: integrality is never required, and the cube center needs
// half-integers.
struct Anchor {
  std::vector<Rational> coords;

  Anchor() = default;
  explicit Anchor(std::vector<Rational> c) : coords(std::move(c)) {}

  static Anchor origin(int d) { return Anchor(std::vector<Rational>(static_cast<size_t>(d), Rational(0))); }
  static Anchor center(const CubeSpec& spec) {
    return Anchor(std::vector<Rational>(static_cast<size_t>(spec.d), Rational(spec.n, 2)));
  }
  static Anchor of_ints(const std::vector<int>& v) {
    std::vector<Rational> c(v.size());
    for (size_t j = 0; j < v.size(); ++j) c[j] = Rational(v[j]);
    return Anchor(std::move(c));
  }

  int dim() const { return static_cast<int>(coords.size()); }

  Rational coord_sum() const {
    Rational s(0);
    for (const auto& c : coords) s += c;
    return s;
  }

  Rational norm_sq() const {
    Rational s(0);
    for (const auto& c : coords) s += c * c;
    return s;
  }

  bool inside(const CubeSpec& spec) const {
    for (const auto& c : coords)
      if (c < 0 || c > spec.n) return false;
    return true;
  }

  bool integral() const {
    for (const auto& c : coords)
      if (boost::multiprecision::denominator(c) != 1) return false;
    return true;
  }

  std::vector<double> to_doubles() const {
    std::vector<double> out(coords.size());
    for (size_t j = 0; j < coords.size(); ++j) out[j] = to_double(coords[j]);
    return out;
  }

  bool equals_point(const std::vector<int>& v) const {
    if (v.size() != coords.size()) return false;
    for (size_t j = 0; j < v.size(); ++j)
      if (coords[j] != v[j]) return false;
    return true;
  }
};

inline void require_anchor_dim(const CubeSpec& spec, const Anchor& a) {
  if (a.dim() != spec.d)
    throw std::invalid_argument("anchor has dimension " + std::to_string(a.dim()) +
                                " but cube spec has d=" + std::to_string(spec.d));
}

// Mean of squared distances to one population, the second moment of the
// squared distances about that mean, and both divided by their natural
// scales d N^2 and d^2 N^4.
struct MomentReport {
  Population population = Population::vertices;
  Rational average;
  Rational second_moment;
  Rational normalized_average;
  Rational normalized_second_moment;
};

// The nine monomial sums from expanding sum_v dist^4(v, a) over coordinate
// index pairs, and their signed recombination.
struct SigmaTerms {
  Rational s1, s2, s3, s4, s5, s6, s7, s8, s9;
  Rational total;

  Rational signed_sum() const {
    return s1 - 2 * s2 + s3 - 2 * s4 + 4 * s5 - 2 * s6 + s7 - 2 * s8 + s9;
  }

  std::array<const Rational*, 9> terms() const {
    return {&s1, &s2, &s3, &s4, &s5, &s6, &s7, &s8, &s9};
  }
};

inline constexpr std::array<const char*, 9> kSigmaFieldNames = {
    "s1", "s2", "s3", "s4", "s5", "s6", "s7", "s8", "s9"};

enum class TheoremId { V1, VIsosceles, VSimilar, ACV, W1, WIsosceles, WSimilar };

inline constexpr std::array<TheoremId, 7> kAllTheorems = {
    TheoremId::V1,  TheoremId::VIsosceles, TheoremId::VSimilar, TheoremId::ACV,
    TheoremId::W1,  TheoremId::WIsosceles, TheoremId::WSimilar};

inline const char* theorem_name(TheoremId id) {
  switch (id) {
    case TheoremId::V1: return "V1";
    case TheoremId::VIsosceles: return "VIsosceles";
    case TheoremId::VSimilar: return "VSimilar";
    case TheoremId::ACV: return "ACV";
    case TheoremId::W1: return "W1";
    case TheoremId::WIsosceles: return "WIsosceles";
    case TheoremId::WSimilar: return "WSimilar";
  }
  return "?";
}

inline std::optional<TheoremId> parse_theorem_id(std::string_view s) {
  for (TheoremId id : kAllTheorems)
    if (s == theorem_name(id)) return id;
  return std::nullopt;
}

// True for the statements whose event is over pairs of points rather than
// single points.
inline bool theorem_uses_pairs(TheoremId id) {
  switch (id) {
    case TheoremId::VIsosceles:
    case TheoremId::VSimilar:
    case TheoremId::WIsosceles:
    case TheoremId::WSimilar:
      return true;
    default:
      return false;
  }
}

inline Population theorem_population(TheoremId id) {
  switch (id) {
    case TheoremId::W1:
    case TheoremId::WIsosceles:
    case TheoremId::WSimilar:
      return Population::lattice;
    default:
      return Population::vertices;
  }
}

}  // namespace hyperlens
