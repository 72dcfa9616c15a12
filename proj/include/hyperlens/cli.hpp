#pragma once

// Command implementations behind the CLI front end. Kept header-only and free
// of argv parsing so the test suites can drive every command directly.
//
// Exit code contract: 0 success, 1 verification failure, 2 precondition or
// usage error.

#include "hyperlens/montecarlo.hpp"
#include "hyperlens/oracle.hpp"
#include "hyperlens/version.hpp"

#include <json.hpp>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace hyperlens::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

inline constexpr uint64_t kDefaultSeed = 1;

// Seed precedence: explicit flag, then HYPERLENS_SEED, then the default.
inline uint64_t resolve_seed(std::optional<uint64_t> flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("HYPERLENS_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw std::invalid_argument("HYPERLENS_SEED is not an unsigned integer: " + std::string(env));
    }
  }
  return kDefaultSeed;
}

// ---------------------------------------------------------------------------
// Anchors

inline std::string anchor_to_string(const Anchor& a) {
  std::ostringstream os;
  os << "(";
  for (size_t j = 0; j < a.coords.size(); ++j) {
    if (j) os << ",";
    os << to_string(a.coords[j]);
  }
  os << ")";
  return os.str();
}

// "origin" and "vertex" both mean the all-zeros vertex; "center" means
// (N/2, ..., N/2); "coords:1,2,1/2" is an explicit list.
inline Anchor parse_anchor(const std::string& text, const CubeSpec& spec) {
  if (text == "origin" || text == "vertex") return Anchor::origin(spec.d);
  if (text == "center") return Anchor::center(spec);
  constexpr std::string_view prefix = "coords:";
  if (text.rfind(prefix, 0) == 0) {
    std::vector<Rational> coords;
    std::string body = text.substr(prefix.size());
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ',')) coords.push_back(parse_rational(tok));
    Anchor a(std::move(coords));
    require_anchor_dim(spec, a);
    return a;
  }
  throw std::invalid_argument("unknown anchor spec '" + text +
                              "' (expected origin|center|vertex|coords:...)");
}

// Random rational anchor strictly inside (0, N)^d with a small denominator.
inline Anchor random_interior_anchor(const CubeSpec& spec, StreamRng& rng) {
  std::vector<Rational> coords(static_cast<size_t>(spec.d));
  for (int j = 0; j < spec.d; ++j) {
    const uint64_t den = 2 + rng.next_below(11);                       // 2..12
    const uint64_t num = 1 + rng.next_below(den * static_cast<uint64_t>(spec.n) - 1);
    coords[static_cast<size_t>(j)] = Rational(Integer(num), Integer(den));
  }
  return Anchor(std::move(coords));
}

// ---------------------------------------------------------------------------
// Run manifests

struct RunManifest {
  std::vector<std::string> command_line;
  uint64_t seed = 0;
  nlohmann::json params;  // command-specific knobs (spec, anchors, ...)
};

inline std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

inline void write_manifest(const RunManifest& m, const std::string& output_path) {
  nlohmann::json j;
  j["command_line"] = m.command_line;
  j["seed"] = m.seed;
  j["params"] = m.params;
  j["timestamp"] = utc_timestamp();
  j["version"] = kVersion;
  j["output"] = std::filesystem::path(output_path).filename().string();
  std::ofstream out(output_path + ".manifest.json");
  if (!out) throw std::runtime_error("cannot write manifest next to " + output_path);
  out << j.dump(2) << "\n";
}

// 17 significant digits: enough to reproduce any double bit-exactly.
inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Writes a CSV atomically: the target appears only on success.
inline void write_file_atomically(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output path " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed for " + path);
  }
  std::filesystem::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// verify: closed forms vs. exhaustive oracle

enum class AnchorMode { grid, random };

struct VerifyOptions {
  Population population = Population::vertices;
  int dmax = 6;
  int nmax = 3;
  AnchorMode anchors = AnchorMode::grid;
  int random_anchors = 25;
  uint64_t seed = kDefaultSeed;
  EnumerationBudget budget;
  unsigned workers = 2;
};

struct VerifyMismatch {
  int d = 0, n = 0;
  std::string anchor;
  std::string field;
  std::string expected, actual;
};

struct VerifyOutcome {
  bool ok = true;
  uint64_t anchors_checked = 0;
  std::optional<VerifyMismatch> first_mismatch;
};

namespace detail {

// Field-by-field comparison of one anchor's closed forms against the oracle.
inline std::optional<VerifyMismatch> check_anchor(const CubeSpec& spec, Population pop,
                                                  const Anchor& a, const EnumerationBudget& budget) {
  auto make_mismatch = [&](const char* field, const Rational& expected, const Rational& actual) {
    VerifyMismatch m;
    m.d = spec.d;
    m.n = spec.n;
    m.anchor = anchor_to_string(a);
    m.field = field;
    m.expected = to_string(expected);
    m.actual = to_string(actual);
    return m;
  };

  const MomentReport closed = moment_report(spec, a, pop);
  const MomentReport brute = brute_moments(spec, pop, a, budget);
  if (closed.average != brute.average) return make_mismatch("average", brute.average, closed.average);
  if (closed.second_moment != brute.second_moment)
    return make_mismatch("second_moment", brute.second_moment, closed.second_moment);

  const SigmaTerms closed_sigma =
      pop == Population::vertices ? sigma_vertices(spec, a) : sigma_lattice(spec, a);
  const SigmaTerms brute_sigma_terms = brute_sigma(spec, pop, a, budget);
  const auto ct = closed_sigma.terms();
  const auto bt = brute_sigma_terms.terms();
  for (size_t k = 0; k < 9; ++k)
    if (*ct[k] != *bt[k]) return make_mismatch(kSigmaFieldNames[k], *bt[k], *ct[k]);
  if (closed_sigma.total != brute_sigma_terms.total)
    return make_mismatch("total", brute_sigma_terms.total, closed_sigma.total);
  return std::nullopt;
}

}  // namespace detail

inline std::vector<Anchor> verify_anchor_set(const CubeSpec& spec, AnchorMode mode,
                                             int random_anchors, uint64_t seed) {
  std::vector<Anchor> anchors;
  if (mode == AnchorMode::grid && spec.d <= 6) {
    PointEnumerator corners(spec, Population::vertices);
    std::vector<int> v;
    while (corners.next(v)) anchors.push_back(Anchor::of_ints(v));
  }
  anchors.push_back(Anchor::center(spec));
  StreamRng rng(seed, static_cast<uint64_t>(spec.d) * 1315423911u + static_cast<uint64_t>(spec.n));
  for (int k = 0; k < random_anchors; ++k) anchors.push_back(random_interior_anchor(spec, rng));
  return anchors;
}

inline VerifyOutcome run_verify_suite(const VerifyOptions& opt, std::ostream& log) {
  // Refuse up front if the largest configuration cannot be enumerated.
  const CubeSpec largest(opt.dmax, opt.nmax);
  if (largest.population_count(opt.population) > opt.budget.max_points)
    throw BudgetError(std::string(population_name(opt.population)) + " at d=" +
                      std::to_string(opt.dmax) + " N=" + std::to_string(opt.nmax) + " needs " +
                      largest.population_count(opt.population).str() + " points but the budget allows " +
                      opt.budget.max_points.str());

  VerifyOutcome outcome;
  for (int d = 1; d <= opt.dmax && outcome.ok; ++d) {
    for (int n = 1; n <= opt.nmax && outcome.ok; ++n) {
      const CubeSpec spec(d, n);
      const auto anchors = verify_anchor_set(spec, opt.anchors, opt.random_anchors, opt.seed);

      std::atomic<size_t> cursor{0};
      std::mutex mismatch_mutex;
      auto worker = [&] {
        for (;;) {
          const size_t i = cursor.fetch_add(1);
          if (i >= anchors.size()) return;
          {
            std::lock_guard<std::mutex> lock(mismatch_mutex);
            if (!outcome.ok) return;
          }
          auto mismatch = detail::check_anchor(spec, opt.population, anchors[i], opt.budget);
          if (mismatch) {
            std::lock_guard<std::mutex> lock(mismatch_mutex);
            if (outcome.ok) {
              outcome.ok = false;
              outcome.first_mismatch = std::move(mismatch);
            }
          }
        }
      };

      const unsigned nworkers = opt.workers >= 1 ? opt.workers : 1;
      std::vector<std::thread> threads;
      for (unsigned w = 1; w < nworkers; ++w) threads.emplace_back(worker);
      worker();
      for (auto& t : threads) t.join();

      outcome.anchors_checked += anchors.size();
      if (outcome.ok)
        log << population_name(opt.population) << " d=" << d << " N=" << n << ": " << anchors.size()
            << " anchors ok\n";
    }
  }
  return outcome;
}

inline int run_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    const VerifyOutcome outcome = run_verify_suite(opt, out);
    if (outcome.ok) {
      out << "verified " << outcome.anchors_checked << " anchor configurations exactly\n";
      return kExitOk;
    }
    const auto& m = *outcome.first_mismatch;
    err << "MISMATCH at d=" << m.d << " N=" << m.n << " a=" << m.anchor << " field=" << m.field
        << ": oracle=" << m.expected << " closed=" << m.actual << "\n";
    return kExitFailure;
  } catch (const BudgetError& e) {
    err << "budget error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }
}

// ---------------------------------------------------------------------------
// theorem: one Monte Carlo verdict as a JSON line

struct TheoremOptions {
  TheoremId id = TheoremId::V1;
  int d = 2;
  int n = 1;
  Rational eta = Rational(1, 4);
  std::optional<Rational> gamma;
  std::string anchor = "origin";
  SamplerConfig sampler;
};

inline nlohmann::json verdict_to_json(const Verdict& v) {
  nlohmann::json j;
  j["theorem"] = theorem_name(v.theorem);
  j["d"] = v.d;
  j["n"] = v.n;
  j["anchor"] = v.anchor;
  j["eta"] = to_string(v.eta);
  if (v.gamma)
    j["gamma"] = to_string(*v.gamma);
  else
    j["gamma"] = nullptr;
  j["empirical"] = v.empirical;
  j["bound"] = v.claimed_bound;
  j["margin"] = v.margin;
  j["pass"] = v.pass;
  j["vacuous"] = v.vacuous;
  j["samples"] = v.samples_used;
  j["degenerate_rejections"] = v.degenerate_rejections;
  j["seed"] = v.config.seed;
  j["workers"] = v.config.workers;
  j["delta"] = v.config.delta;
  j["version"] = kVersion;
  return j;
}

inline int run_theorem(const TheoremOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    const CubeSpec spec(opt.d, opt.n);
    const Anchor a = parse_anchor(opt.anchor, spec);
    Verdict v = estimate_theorem(opt.id, spec, a, opt.eta, opt.gamma, opt.sampler);
    v.anchor = opt.anchor;
    out << verdict_to_json(v).dump() << "\n";
    return v.pass ? kExitOk : kExitFailure;
  } catch (const PreconditionError& e) {
    err << "precondition violated: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

// ---------------------------------------------------------------------------
// hist: histogram CSV

struct HistOptions {
  HistQuantity quantity = HistQuantity::vertex_distance;
  int d = 2;
  int n = 1;
  std::string anchor = "origin";
  unsigned bins = 64;
  SamplerConfig sampler;
  std::string out_path;
  std::vector<std::string> command_line;
};

inline int run_hist(const HistOptions& opt, std::ostream& err) {
  try {
    const CubeSpec spec(opt.d, opt.n);
    const Anchor a = parse_anchor(opt.anchor, spec);
    const Histogram h = empirical_histogram(opt.quantity, spec, a, opt.bins, opt.sampler);

    std::ostringstream csv;
    csv << "bin_lo,bin_hi,count\n";
    for (size_t b = 0; b < h.counts.size(); ++b)
      csv << format_double(h.edges[b]) << "," << format_double(h.edges[b + 1]) << ","
          << h.counts[b] << "\n";
    write_file_atomically(opt.out_path, csv.str());

    RunManifest manifest;
    manifest.command_line = opt.command_line;
    manifest.seed = opt.sampler.seed;
    manifest.params = {{"command", "hist"},
                       {"quantity", hist_quantity_name(opt.quantity)},
                       {"d", opt.d},
                       {"n", opt.n},
                       {"anchor", opt.anchor},
                       {"bins", opt.bins},
                       {"samples", opt.sampler.samples},
                       {"workers", opt.sampler.workers}};
    write_manifest(manifest, opt.out_path);
    return kExitOk;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

// ---------------------------------------------------------------------------
// sweep: verdict grid CSV

struct SweepOptions {
  TheoremId id = TheoremId::V1;
  std::vector<int> d_list;
  std::vector<Rational> eta_list;
  std::optional<Rational> gamma;
  int n = 1;
  std::string anchor = "origin";
  SamplerConfig sampler;
  std::string out_path;
  std::vector<std::string> command_line;
};

inline int run_sweep(const SweepOptions& opt, std::ostream& err) {
  try {
    if (opt.d_list.empty() || opt.eta_list.empty())
      throw std::invalid_argument("sweep needs non-empty --d-list and --eta-list");

    bool any_fail = false;
    std::ostringstream csv;
    csv << "d,N,eta,gamma,bound,empirical,margin,status\n";
    for (int d : opt.d_list) {
      for (const Rational& eta : opt.eta_list) {
        const std::string gamma_text = opt.gamma ? to_string(*opt.gamma) : "";
        csv << d << "," << opt.n << "," << to_string(eta) << "," << gamma_text << ",";
        try {
          const CubeSpec spec(d, opt.n);
          const Anchor a = parse_anchor(opt.anchor, spec);
          const Verdict v = estimate_theorem(opt.id, spec, a, eta, opt.gamma, opt.sampler);
          const char* status = v.vacuous ? "vacuous" : (v.pass ? "pass" : "fail");
          if (!v.pass) any_fail = true;
          csv << format_double(v.claimed_bound) << "," << format_double(v.empirical) << ","
              << format_double(v.margin) << "," << status << "\n";
        } catch (const PreconditionError&) {
          csv << ",,,skipped\n";
        }
      }
    }
    write_file_atomically(opt.out_path, csv.str());

    RunManifest manifest;
    manifest.command_line = opt.command_line;
    manifest.seed = opt.sampler.seed;
    nlohmann::json etas = nlohmann::json::array();
    for (const auto& e : opt.eta_list) etas.push_back(to_string(e));
    manifest.params = {{"command", "sweep"},
                       {"theorem", theorem_name(opt.id)},
                       {"d_list", opt.d_list},
                       {"eta_list", etas},
                       {"gamma", opt.gamma ? nlohmann::json(to_string(*opt.gamma)) : nlohmann::json()},
                       {"n", opt.n},
                       {"anchor", opt.anchor},
                       {"samples", opt.sampler.samples},
                       {"workers", opt.sampler.workers}};
    write_manifest(manifest, opt.out_path);
    return any_fail ? kExitFailure : kExitOk;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace hyperlens::cli
