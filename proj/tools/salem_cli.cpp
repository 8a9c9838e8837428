#include "salem/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"salem: number-field Salem measure construction and lemma checkers"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<double> tau, rho;
  std::vector<double> M;
  std::optional<int> k, workers;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::vector<double> ps, restrictionM;
  std::optional<double> q;

  app.add_option("-c,--config", config_path, "JSON config file (see docs/config.schema.json)");
  app.add_option("--tau", tau, "tau > 1");
  app.add_option("--rho", rho, "rho in (-d, d)");
  app.add_option("--M", M, "level list M_1 < M_2 < ...");
  app.add_option("--k", k, "level to analyse (-1: deepest)");
  app.add_option("--seed", seed, "RNG seed");
  app.add_option("--workers", workers, "worker threads");
  app.add_option("-o,--out", out, "output directory");

  const std::vector<std::pair<std::string, std::string>> subs = {
      {"verify", "algebraic lemma suite"},
      {"measure", "mass, symmetry and transform of mu_k"},
      {"decay", "Fourier decay fit of mu_k"},
      {"regularity", "ball-mass fit and k-ball bounds"},
      {"restriction", "two-point restriction-failure growth"},
      {"dimension", "covering sums and E-membership"},
      {"report", "merge reports under the output directory"}};
  for (auto& [name, help] : subs) {
    CLI::App* s = app.add_subcommand(name, help);
    if (name == "restriction") {
      s->add_option("--p", ps, "exponents p (default p_fail - 1, p_fail + 1)");
      s->add_option("--q", q, "exponent q");
      s->add_option("--pair", restrictionM, "two M values")->expected(2);
    }
  }
  CLI11_PARSE(app, argc, argv);

  salem::RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = salem::RunConfig::load(config_path);
  } catch (const salem::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return salem::kExitConfig;
  }
  if (tau) cfg.tau = *tau;
  if (rho) cfg.rho = *rho;
  if (!M.empty()) cfg.M = M;
  if (k) cfg.k = *k;
  if (seed) cfg.seed = *seed;
  if (workers) cfg.workers = *workers;
  if (out) cfg.output = *out;
  if (!ps.empty()) cfg.restriction.p = ps;
  if (q) cfg.restriction.q = *q;
  if (!restrictionM.empty()) cfg.restriction.M = restrictionM;

  const std::string cmd = app.get_subcommands().front()->get_name();
  return salem::run_command(cmd, cfg, std::cout);
}
