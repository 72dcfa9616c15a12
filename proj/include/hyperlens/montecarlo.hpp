#pragma once

// Seeded Monte Carlo estimation of the concentration statements at large d.
// Draw tuples, evaluate the event predicate, compare the empirical proportion
// against the claimed bound minus a one-sided Hoeffding margin. Sampling is
// embarrassingly parallel over sample indices; per-sample counter streams
// make verdicts a function of (seed, samples) only, never of worker count.

#include "hyperlens/exact.hpp"
#include "hyperlens/geometry.hpp"
#include "hyperlens/rng.hpp"
#include "hyperlens/types.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace hyperlens {

struct SamplerConfig {
  uint64_t seed = 0;
  uint64_t samples = 100000;
  unsigned workers = 1;
  double delta = 1e-6;  // failure probability behind the sampling margin
};

// One theorem check: what was estimated, what the statement guarantees, and
// whether the estimate clears the guarantee within the sampling margin.
struct Verdict {
  TheoremId theorem = TheoremId::V1;
  int d = 0;
  int n = 0;
  std::string anchor;
  Rational eta;
  std::optional<Rational> gamma;
  double empirical = 0;
  double claimed_bound = 0;
  double margin = 0;
  bool pass = false;
  bool vacuous = false;
  uint64_t samples_used = 0;
  uint64_t degenerate_rejections = 0;
  SamplerConfig config;
};

inline double hoeffding_margin(uint64_t samples, double delta) {
  return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(samples)));
}

namespace detail {

inline void draw_vertex(StreamRng& rng, const CubeSpec& spec, std::vector<int>& out) {
  out.resize(static_cast<size_t>(spec.d));
  uint64_t word = 0;
  for (int j = 0; j < spec.d; ++j) {
    if ((j & 63) == 0) word = rng.next();
    out[static_cast<size_t>(j)] = (word >> (j & 63)) & 1u ? spec.n : 0;
  }
}

inline void draw_lattice(StreamRng& rng, const CubeSpec& spec, std::vector<int>& out) {
  out.resize(static_cast<size_t>(spec.d));
  const uint64_t m = static_cast<uint64_t>(spec.n) + 1;
  for (int j = 0; j < spec.d; ++j)
    out[static_cast<size_t>(j)] = static_cast<int>(rng.next_below(m));
}

inline void draw_point(StreamRng& rng, const CubeSpec& spec, Population pop, std::vector<int>& out) {
  if (pop == Population::vertices)
    draw_vertex(rng, spec, out);
  else
    draw_lattice(rng, spec, out);
}

inline double point_distance(const std::vector<double>& a, const std::vector<int>& v,
                             double inv_scale) {
  double s = 0;
  for (size_t j = 0; j < v.size(); ++j) {
    const double t = static_cast<double>(v[j]) - a[j];
    s += t * t;
  }
  return std::sqrt(s) * inv_scale;
}

inline double pair_distance(const std::vector<int>& u, const std::vector<int>& v,
                            double inv_scale) {
  double s = 0;
  for (size_t j = 0; j < v.size(); ++j) {
    const double t = static_cast<double>(u[j]) - static_cast<double>(v[j]);
    s += t * t;
  }
  return std::sqrt(s) * inv_scale;
}

// Splits [0, samples) into per-worker ranges, runs `body(begin, end, slot)`,
// and joins. Slot w owns its own accumulators, so the reduction is exact.
template <typename Body>
inline void parallel_samples(uint64_t samples, unsigned workers, Body body) {
  if (workers <= 1 || samples < 2) {
    body(uint64_t{0}, samples, 0u);
    return;
  }
  const uint64_t chunk = (samples + workers - 1) / workers;
  std::vector<std::thread> threads;
  for (unsigned w = 0; w < workers; ++w) {
    const uint64_t begin = w * chunk;
    if (begin >= samples) break;
    const uint64_t end = begin + chunk < samples ? begin + chunk : samples;
    threads.emplace_back([=] { body(begin, end, w); });
  }
  for (auto& t : threads) t.join();
}

}  // namespace detail

inline std::vector<int> sample_vertex(const CubeSpec& spec, uint64_t stream_index, uint64_t seed) {
  StreamRng rng(seed, stream_index);
  std::vector<int> out;
  detail::draw_vertex(rng, spec, out);
  return out;
}

inline std::vector<int> sample_lattice_point(const CubeSpec& spec, uint64_t stream_index,
                                             uint64_t seed) {
  StreamRng rng(seed, stream_index);
  std::vector<int> out;
  detail::draw_lattice(rng, spec, out);
  return out;
}

inline std::string summarize_anchor(const CubeSpec& spec, const Anchor& a) {
  bool all_zero = true, all_center = true;
  const Rational half(spec.n, 2);
  for (const auto& c : a.coords) {
    if (c != 0) all_zero = false;
    if (c != half) all_center = false;
  }
  if (all_zero) return "origin";
  if (all_center) return "center";
  std::ostringstream os;
  os << "(";
  const size_t shown = a.coords.size() <= 16 ? a.coords.size() : 16u;
  for (size_t j = 0; j < shown; ++j) {
    if (j) os << ",";
    os << to_string(a.coords[j]);
  }
  if (shown < a.coords.size()) os << ",...";
  os << ")";
  return os.str();
}

// Estimates the event proportion for one theorem and wraps it in a Verdict.
// Degenerate tuples (coincident points, or a point coinciding with the
// anchor, for the triangle statements) are rejected and redrawn from the same
// per-sample stream, with the rejection count reported.
inline Verdict estimate_theorem(TheoremId id, const CubeSpec& spec, const Anchor& a,
                                const Rational& eta, std::optional<Rational> gamma,
                                const SamplerConfig& config) {
  require_anchor_dim(spec, a);
  if (config.samples < 1) throw std::invalid_argument("estimate_theorem: samples must be >= 1");
  if (config.workers < 1) throw std::invalid_argument("estimate_theorem: workers must be >= 1");

  const ConcentrationBound bound = concentration_bound(id, spec.d, eta, gamma);
  if (id == TheoremId::ACV) {
    const Rational ra2 = center_distance_sq(spec, a);
    if (!geq_int_power(ra2, spec.d, 2 * (*gamma - eta)))
      throw PreconditionError("ACV requires dist_d(a, c) >= d^(gamma - eta)");
  }

  const Population pop = theorem_population(id);
  const bool pairs = theorem_uses_pairs(id);
  const bool similar = id == TheoremId::VSimilar || id == TheoremId::WSimilar;

  // Exact targets, rounded once.
  double anchor_target = 0;
  if (id != TheoremId::ACV)
    anchor_target = std::sqrt(to_double(moment_report(spec, a, pop).normalized_average));
  const double mutual_target = pop == Population::vertices
                                   ? 1.0 / std::numbers::sqrt2
                                   : std::sqrt(to_double(Rational(1, 6) + Rational(1, 3 * Integer(spec.n))));
  const double hw = bound.half_width;
  const double cos_threshold = bound.cos_threshold.value_or(0.0);

  const std::vector<double> ad = a.to_doubles();
  const double inv_scale = 1.0 / (std::sqrt(static_cast<double>(spec.d)) * spec.n);

  // The anchor can collide with a draw only if it is itself a population
  // member; degeneracy is exact coordinate equality.
  std::vector<int> anchor_int;
  bool anchor_in_population = false;
  if (a.integral() && a.inside(spec)) {
    anchor_int.resize(static_cast<size_t>(spec.d));
    bool vertex_like = true;
    for (int j = 0; j < spec.d; ++j) {
      const Integer num = boost::multiprecision::numerator(a.coords[static_cast<size_t>(j)]);
      anchor_int[static_cast<size_t>(j)] = num.convert_to<int>();
      if (anchor_int[static_cast<size_t>(j)] != 0 && anchor_int[static_cast<size_t>(j)] != spec.n)
        vertex_like = false;
    }
    anchor_in_population = pop == Population::lattice || vertex_like;
  }

  constexpr uint64_t kMaxRedraws = 65536;

  const unsigned nworkers = config.workers;
  std::vector<uint64_t> success(nworkers, 0), rejections(nworkers, 0);
  std::vector<std::string> failure(nworkers);

  detail::parallel_samples(config.samples, nworkers, [&](uint64_t begin, uint64_t end, unsigned slot) {
    std::vector<int> p1, p2;
    uint64_t hits = 0, rejected = 0;
    for (uint64_t i = begin; i < end; ++i) {
      StreamRng rng(config.seed, i);
      if (!pairs) {
        detail::draw_point(rng, spec, pop, p1);
        if (id == TheoremId::ACV) {
          uint64_t attempts = 0;
          while (anchor_in_population && p1 == anchor_int) {
            ++rejected;
            if (++attempts > kMaxRedraws) {
              failure[slot] = "no non-degenerate samples available";
              return;
            }
            detail::draw_point(rng, spec, pop, p1);
          }
          double dot = 0, na = 0, nv = 0;
          const double c = spec.n / 2.0;
          for (int j = 0; j < spec.d; ++j) {
            const double ua = ad[static_cast<size_t>(j)] - c;
            const double uv = static_cast<double>(p1[static_cast<size_t>(j)]) - c;
            dot += ua * uv;
            na += ua * ua;
            nv += uv * uv;
          }
          const double cosine = dot / std::sqrt(na * nv);
          if (std::abs(cosine) <= cos_threshold) ++hits;
        } else {
          const double dist = detail::point_distance(ad, p1, inv_scale);
          if (std::abs(dist - anchor_target) <= hw) ++hits;
        }
      } else {
        uint64_t attempts = 0;
        for (;;) {
          detail::draw_point(rng, spec, pop, p1);
          detail::draw_point(rng, spec, pop, p2);
          const bool degenerate = p1 == p2 ||
                                  (anchor_in_population && (p1 == anchor_int || p2 == anchor_int));
          if (!degenerate) break;
          ++rejected;
          if (++attempts > kMaxRedraws) {
            failure[slot] = "no non-degenerate samples available";
            return;
          }
        }
        const double d1 = detail::point_distance(ad, p1, inv_scale);
        const double d2 = detail::point_distance(ad, p2, inv_scale);
        if (similar) {
          const double d12 = detail::pair_distance(p1, p2, inv_scale);
          if (similar_check(d1, d2, d12, anchor_target, mutual_target, hw)) ++hits;
        } else {
          if (std::abs(d1 - d2) <= 2 * hw) ++hits;
        }
      }
    }
    success[slot] = hits;
    rejections[slot] = rejected;
  });

  for (const auto& f : failure)
    if (!f.empty()) throw std::domain_error("estimate_theorem: " + f);

  uint64_t hits = 0, rejected = 0;
  for (unsigned w = 0; w < nworkers; ++w) {
    hits += success[w];
    rejected += rejections[w];
  }

  Verdict v;
  v.theorem = id;
  v.d = spec.d;
  v.n = spec.n;
  v.anchor = summarize_anchor(spec, a);
  v.eta = eta;
  v.gamma = gamma;
  v.empirical = static_cast<double>(hits) / static_cast<double>(config.samples);
  v.claimed_bound = bound.value;
  v.margin = hoeffding_margin(config.samples, config.delta);
  v.pass = v.empirical >= v.claimed_bound - v.margin;
  v.vacuous = bound.vacuous();
  v.samples_used = config.samples;
  v.degenerate_rejections = rejected;
  v.config = config;
  return v;
}

enum class HistQuantity { vertex_distance, lattice_distance, pair_distance, cosine };

inline const char* hist_quantity_name(HistQuantity q) {
  switch (q) {
    case HistQuantity::vertex_distance: return "vertex_distance";
    case HistQuantity::lattice_distance: return "lattice_distance";
    case HistQuantity::pair_distance: return "pair_distance";
    case HistQuantity::cosine: return "cosine";
  }
  return "?";
}

inline std::optional<HistQuantity> parse_hist_quantity(std::string_view s) {
  for (HistQuantity q : {HistQuantity::vertex_distance, HistQuantity::lattice_distance,
                         HistQuantity::pair_distance, HistQuantity::cosine})
    if (s == hist_quantity_name(q)) return q;
  return std::nullopt;
}

struct Histogram {
  std::vector<double> edges;     // bins + 1, fixed width over the domain
  std::vector<uint64_t> counts;  // per bin; sums to the sample count
  uint64_t samples = 0;
};

// Fixed-width histogram of a sampled quantity over [0, 1] ([-1, 1] for the
// cosine). Deterministic for a fixed seed, any worker count.
inline Histogram empirical_histogram(HistQuantity qty, const CubeSpec& spec, const Anchor& a,
                                     unsigned bins, const SamplerConfig& config) {
  require_anchor_dim(spec, a);
  if (bins < 1) throw std::invalid_argument("empirical_histogram: bins must be >= 1");
  if (config.samples < 1) throw std::invalid_argument("empirical_histogram: samples must be >= 1");

  const double lo = qty == HistQuantity::cosine ? -1.0 : 0.0;
  const double hi = 1.0;
  const std::vector<double> ad = a.to_doubles();
  const double inv_scale = 1.0 / (std::sqrt(static_cast<double>(spec.d)) * spec.n);

  if (qty == HistQuantity::cosine) {
    // The ray to the anchor must have positive length.
    bool centered = true;
    const Rational half(spec.n, 2);
    for (const auto& c : a.coords)
      if (c != half) centered = false;
    if (centered) throw std::domain_error("cosine histogram: anchor coincides with the center");
  }

  const unsigned nworkers = config.workers >= 1 ? config.workers : 1;
  std::vector<std::vector<uint64_t>> counts(nworkers, std::vector<uint64_t>(bins, 0));

  detail::parallel_samples(config.samples, nworkers, [&](uint64_t begin, uint64_t end, unsigned slot) {
    std::vector<int> p1, p2;
    auto& bucket = counts[slot];
    for (uint64_t i = begin; i < end; ++i) {
      StreamRng rng(config.seed, i);
      double value = 0;
      switch (qty) {
        case HistQuantity::vertex_distance:
          detail::draw_vertex(rng, spec, p1);
          value = detail::point_distance(ad, p1, inv_scale);
          break;
        case HistQuantity::lattice_distance:
          detail::draw_lattice(rng, spec, p1);
          value = detail::point_distance(ad, p1, inv_scale);
          break;
        case HistQuantity::pair_distance:
          detail::draw_lattice(rng, spec, p1);
          detail::draw_lattice(rng, spec, p2);
          value = detail::pair_distance(p1, p2, inv_scale);
          break;
        case HistQuantity::cosine: {
          detail::draw_vertex(rng, spec, p1);
          double dot = 0, na = 0, nv = 0;
          const double c = spec.n / 2.0;
          for (int j = 0; j < spec.d; ++j) {
            const double ua = ad[static_cast<size_t>(j)] - c;
            const double uv = static_cast<double>(p1[static_cast<size_t>(j)]) - c;
            dot += ua * uv;
            na += ua * ua;
            nv += uv * uv;
          }
          value = dot / std::sqrt(na * nv);
          break;
        }
      }
      long idx = static_cast<long>((value - lo) / (hi - lo) * bins);
      if (idx < 0) idx = 0;
      if (idx >= static_cast<long>(bins)) idx = static_cast<long>(bins) - 1;
      ++bucket[static_cast<size_t>(idx)];
    }
  });

  Histogram h;
  h.samples = config.samples;
  h.edges.resize(bins + 1);
  for (unsigned b = 0; b <= bins; ++b)
    h.edges[b] = lo + (hi - lo) * static_cast<double>(b) / static_cast<double>(bins);
  h.counts.assign(bins, 0);
  for (const auto& part : counts)
    for (unsigned b = 0; b < bins; ++b) h.counts[b] += part[b];
  return h;
}

}  // namespace hyperlens
