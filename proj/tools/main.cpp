#include <CLI11.hpp>
#include <iostream>

#include "reflectchain/cli.hpp"

using namespace reflectchain;

namespace {

struct CliArgs {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  double tol = 0.0;
  bool tol_set = false;
  std::string out_path;
  std::string format;
  bool exhaustive = false;
};

RunConfig resolve_config(const CliArgs& args) {
  RunConfig cfg;
  if (!args.config_path.empty()) cfg = load_run_config(args.config_path);
  if (args.seed_set) cfg.rng_seed = args.seed;
  if (args.tol_set) cfg.tolerance = args.tol;
  if (!args.out_path.empty()) cfg.out_path = args.out_path;
  if (!args.format.empty()) {
    if (args.format != "json" && args.format != "csv")
      throw std::invalid_argument("--format must be json or csv");
    cfg.format = args.format;
  }
  return cfg;
}

void print_summary(const SuiteReport& rep) {
  for (auto& c : rep.checks) {
    std::cout << (c.pass ? "  [pass] " : "  [FAIL] ") << c.id
              << "  residual " << c.residual << "  tol " << c.tolerance;
    auto it = c.metadata.find("unsupported");
    if (it != c.metadata.end()) std::cout << "  (" << it->second << ")";
    std::cout << "\n";
  }
  std::cout << (rep.all_pass() ? "suite passed" : "suite FAILED") << " ("
            << rep.wall_ms << " ms)\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"reflectchain: open spin-chain R/K-matrix and Bethe-ansatz verification"};
  app.require_subcommand(1);
  app.fallthrough();

  CliArgs args;
  app.add_option("--config", args.config_path, "JSON run configuration");
  auto* seed_opt = app.add_option("--seed", args.seed, "override checks.rng_seed");
  auto* tol_opt = app.add_option("--tol", args.tol, "override checks.tolerance");
  app.add_option("--out", args.out_path, "report output path");
  app.add_option("--format", args.format, "json | csv (csv: spectrum only)");
  app.add_flag("--exhaustive", args.exhaustive,
               "coefficient-wise commutativity checks for L <= 2");

  auto* verify = app.add_subcommand("verify", "scattering, boundary and chain identity suites");
  auto* spectrum = app.add_subcommand("spectrum", "exact diagonalization and pseudo-vacuum");
  auto* bethe = app.add_subcommand("bethe", "Bethe roots and the ED match table");
  auto* fusion = app.add_subcommand("fusion", "fusion identities and quantum determinants");

  CLI11_PARSE(app, argc, argv);
  args.seed_set = seed_opt->count() > 0;
  args.tol_set = tol_opt->count() > 0;

  try {
    RunConfig cfg = resolve_config(args);
    CommandOptions opts;
    opts.exhaustive = args.exhaustive;
    SuiteReport rep;
    int rc = 2;
    if (verify->parsed()) rc = cmd_verify(cfg, rep, opts);
    else if (spectrum->parsed()) rc = cmd_spectrum(cfg, rep, opts);
    else if (bethe->parsed()) rc = cmd_bethe(cfg, rep, opts);
    else if (fusion->parsed()) rc = cmd_fusion(cfg, rep, opts);
    print_summary(rep);
    return rc;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
