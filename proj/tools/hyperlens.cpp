// hyperlens: exact and empirical verification of distance concentration on
// lattice hypercubes.
//
//   hyperlens verify   -- closed forms vs. exhaustive enumeration, exactly
//   hyperlens theorem  -- one seeded Monte Carlo verdict as a JSON line
//   hyperlens hist     -- histogram CSV of a sampled quantity
//   hyperlens sweep    -- verdict grid over (d, eta) as CSV

#include "hyperlens/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace hyperlens;

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(tok);
  return out;
}

TheoremId parse_theorem_or_throw(const std::string& name) {
  auto id = parse_theorem_id(name);
  if (!id)
    throw CLI::ValidationError("--id", "unknown theorem id '" + name +
                                          "' (V1|VIsosceles|VSimilar|ACV|W1|WIsosceles|WSimilar)");
  return *id;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact + Monte Carlo verification of hypercube distance concentration"};
  app.require_subcommand(1);

  std::vector<std::string> command_line(argv, argv + argc);

  // --- verify ---------------------------------------------------------------
  auto* verify = app.add_subcommand("verify", "check closed forms against brute force, exactly");
  std::string v_population = "vertices";
  int v_dmax = 6, v_nmax = 3;
  std::string v_anchors = "grid";
  std::optional<uint64_t> v_seed;
  std::string v_max_points;
  verify->add_option("--population", v_population, "vertices|lattice")
      ->check(CLI::IsMember({"vertices", "lattice"}));
  verify->add_option("--dmax", v_dmax, "largest dimension")->check(CLI::PositiveNumber);
  verify->add_option("--nmax", v_nmax, "largest side length")->check(CLI::PositiveNumber);
  verify->add_option("--anchors", v_anchors, "grid | random:<k>");
  verify->add_option("--seed", v_seed, "seed for the random anchors");
  verify->add_option("--max-points", v_max_points, "enumeration budget override");

  // --- theorem ----------------------------------------------------------------
  auto* theorem = app.add_subcommand("theorem", "Monte Carlo verdict for one theorem");
  std::string t_id = "V1", t_eta = "1/4", t_anchor = "origin";
  std::optional<std::string> t_gamma;
  int t_d = 2, t_n = 1;
  uint64_t t_samples = 100000;
  unsigned t_workers = 1;
  std::optional<uint64_t> t_seed;
  double t_delta = 1e-6;
  theorem->add_option("--id", t_id, "V1|VIsosceles|VSimilar|ACV|W1|WIsosceles|WSimilar")->required();
  theorem->add_option("--d", t_d, "dimension")->required()->check(CLI::PositiveNumber);
  theorem->add_option("--n", t_n, "side length N")->check(CLI::PositiveNumber);
  theorem->add_option("--eta", t_eta, "interval exponent in (0, 1/2), e.g. 1/4 or 0.25");
  theorem->add_option("--gamma", t_gamma, "cosine exponent (ACV only)");
  theorem->add_option("--anchor", t_anchor, "origin|center|vertex|coords:...");
  theorem->add_option("--samples", t_samples, "Monte Carlo sample count");
  theorem->add_option("--seed", t_seed, "RNG seed");
  theorem->add_option("--workers", t_workers, "worker threads")->check(CLI::PositiveNumber);
  theorem->add_option("--delta", t_delta, "margin failure probability");

  // --- hist -------------------------------------------------------------------
  auto* hist = app.add_subcommand("hist", "histogram CSV of a sampled quantity");
  std::string h_quantity = "vertex_distance", h_anchor = "origin", h_out;
  int h_d = 2, h_n = 1;
  unsigned h_bins = 64, h_workers = 1;
  uint64_t h_samples = 100000;
  std::optional<uint64_t> h_seed;
  hist->add_option("--quantity", h_quantity, "vertex_distance|lattice_distance|pair_distance|cosine")
      ->check(CLI::IsMember({"vertex_distance", "lattice_distance", "pair_distance", "cosine"}));
  hist->add_option("--d", h_d, "dimension")->required()->check(CLI::PositiveNumber);
  hist->add_option("--n", h_n, "side length N")->check(CLI::PositiveNumber);
  hist->add_option("--anchor", h_anchor, "origin|center|vertex|coords:...");
  hist->add_option("--bins", h_bins, "bin count")->check(CLI::PositiveNumber);
  hist->add_option("--samples", h_samples, "sample count");
  hist->add_option("--seed", h_seed, "RNG seed");
  hist->add_option("--workers", h_workers, "worker threads")->check(CLI::PositiveNumber);
  hist->add_option("--out", h_out, "output CSV path")->required();

  // --- sweep ------------------------------------------------------------------
  auto* sweep = app.add_subcommand("sweep", "verdict grid over (d, eta) as CSV");
  std::string s_id = "V1", s_d_list, s_eta_list, s_anchor = "origin", s_out;
  std::optional<std::string> s_gamma;
  int s_n = 1;
  uint64_t s_samples = 100000;
  unsigned s_workers = 1;
  std::optional<uint64_t> s_seed;
  sweep->add_option("--id", s_id, "theorem id")->required();
  sweep->add_option("--d-list", s_d_list, "comma-separated dimensions")->required();
  sweep->add_option("--eta-list", s_eta_list, "comma-separated eta values")->required();
  sweep->add_option("--gamma", s_gamma, "cosine exponent (ACV only)");
  sweep->add_option("--n", s_n, "side length N")->check(CLI::PositiveNumber);
  sweep->add_option("--anchor", s_anchor, "anchor spec");
  sweep->add_option("--samples", s_samples, "samples per grid cell");
  sweep->add_option("--seed", s_seed, "RNG seed");
  sweep->add_option("--workers", s_workers, "worker threads")->check(CLI::PositiveNumber);
  sweep->add_option("--out", s_out, "output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kExitOk : cli::kExitUsage;
  }

  try {
    if (verify->parsed()) {
      cli::VerifyOptions opt;
      auto pop = parse_population(v_population);
      opt.population = *pop;
      opt.dmax = v_dmax;
      opt.nmax = v_nmax;
      opt.seed = cli::resolve_seed(v_seed);
      if (!v_max_points.empty()) opt.budget.max_points = Integer(v_max_points);
      if (v_anchors == "grid") {
        opt.anchors = cli::AnchorMode::grid;
      } else if (v_anchors.rfind("random:", 0) == 0) {
        opt.anchors = cli::AnchorMode::random;
        opt.random_anchors = std::stoi(v_anchors.substr(7));
      } else {
        std::cerr << "usage error: --anchors expects grid or random:<k>\n";
        return cli::kExitUsage;
      }
      return cli::run_verify(opt, std::cout, std::cerr);
    }

    if (theorem->parsed()) {
      cli::TheoremOptions opt;
      opt.id = parse_theorem_or_throw(t_id);
      opt.d = t_d;
      opt.n = t_n;
      opt.eta = parse_rational(t_eta);
      if (t_gamma) opt.gamma = parse_rational(*t_gamma);
      opt.anchor = t_anchor;
      opt.sampler.samples = t_samples;
      opt.sampler.workers = t_workers;
      opt.sampler.seed = cli::resolve_seed(t_seed);
      opt.sampler.delta = t_delta;
      return cli::run_theorem(opt, std::cout, std::cerr);
    }

    if (hist->parsed()) {
      cli::HistOptions opt;
      opt.quantity = *parse_hist_quantity(h_quantity);
      opt.d = h_d;
      opt.n = h_n;
      opt.anchor = h_anchor;
      opt.bins = h_bins;
      opt.sampler.samples = h_samples;
      opt.sampler.workers = h_workers;
      opt.sampler.seed = cli::resolve_seed(h_seed);
      opt.out_path = h_out;
      opt.command_line = command_line;
      return cli::run_hist(opt, std::cerr);
    }

    if (sweep->parsed()) {
      cli::SweepOptions opt;
      opt.id = parse_theorem_or_throw(s_id);
      for (const auto& tok : split_commas(s_d_list)) opt.d_list.push_back(std::stoi(tok));
      for (const auto& tok : split_commas(s_eta_list)) opt.eta_list.push_back(parse_rational(tok));
      if (s_gamma) opt.gamma = parse_rational(*s_gamma);
      opt.n = s_n;
      opt.anchor = s_anchor;
      opt.sampler.samples = s_samples;
      opt.sampler.workers = s_workers;
      opt.sampler.seed = cli::resolve_seed(s_seed);
      opt.out_path = s_out;
      opt.command_line = command_line;
      return cli::run_sweep(opt, std::cerr);
    }
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return cli::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitUsage;
  }
  return cli::kExitUsage;
}
