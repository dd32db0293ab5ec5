#include "reflectchain/cli.hpp"

#include <chrono>
#include <fstream>
#include <future>

namespace reflectchain {

namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// Run independent check tasks on worker threads; results join in the fixed
// submission order so reports stay deterministic.
class CheckPool {
 public:
  void submit(std::function<CheckRecord()> task) {
    futures_.push_back(std::async(std::launch::async, std::move(task)));
  }
  std::vector<CheckRecord> join() {
    std::vector<CheckRecord> out;
    for (auto& f : futures_) out.push_back(f.get());
    futures_.clear();
    return out;
  }

 private:
  std::vector<std::future<CheckRecord>> futures_;
};

ScatteringPair scattering_with_optional_fault(const GradedSpace& sp, bool fault) {
  ScatteringPair pair = build_scattering(sp);
  if (fault) {
    // Seeded fault: flip the sign of one permutation entry so every exact
    // identity breaks visibly.
    Mat p = pair.P;
    p(0, 0) += 0.5;
    pair.P = p;
    const int d2 = sp.dim * sp.dim;
    pair.R = MatrixPoly({I * p, Mat::Identity(d2, d2)}, d2);
  }
  return pair;
}

}  // namespace

int cmd_verify(const RunConfig& cfg, SuiteReport& out, const CommandOptions& opts) {
  Stopwatch watch;
  out.suite = "verify";
  out.config = config_echo(cfg);
  GradedSpace sp = cfg.space();
  ScatteringPair pair = scattering_with_optional_fault(sp, cfg.fault_injection);
  const double tol = cfg.tolerance;
  const int samples = cfg.samples;

  CheckPool pool;
  pool.submit([=] { return check_YBE(pair, YbeKind::RRR, samples, Rng::seeded(cfg.rng_seed + 101), tol); });
  pool.submit([=] { return check_YBE(pair, YbeKind::RbarRbarR, samples, Rng::seeded(cfg.rng_seed + 102), tol); });
  pool.submit([=] { return check_unitarity(pair, RKind::R, tol); });
  pool.submit([=] { return check_unitarity(pair, RKind::Rbar, tol); });
  pool.submit([=] { return check_crossing_unitarity(pair, RKind::R, tol); });
  pool.submit([=] { return check_crossing_unitarity(pair, RKind::Rbar, tol); });
  pool.submit([=] { return check_AA_commutation(pair, std::max(1, samples / 5), Rng::seeded(cfg.rng_seed + 103), tol); });
  pool.submit([=] { return check_cp_symmetry(pair, tol); });
  auto checks = pool.join();

  // Boundary checks for the configured K matrices.
  KMatrix km = cfg.K_minus(sp);
  KMatrix kp_base = cfg.K_plus_base(sp);
  if (cfg.variant == BoundaryVariant::SP) {
    checks.push_back(check_reflection(pair, km, km, ReflectionEq::re, samples,
                                      Rng::seeded(cfg.rng_seed + 201), tol));
    KMatrix kbar = make_K_pair_SP(km, sp);
    checks.push_back(check_reflection(pair, kbar, km, ReflectionEq::re3, samples,
                                      Rng::seeded(cfg.rng_seed + 202), tol));
    KMatrix kplus = make_K_SP_dual(kp_base, sp);
    checks.push_back(check_reflection(pair, kplus, kplus, ReflectionEq::re_plus, samples,
                                      Rng::seeded(cfg.rng_seed + 203), tol));
  } else {
    checks.push_back(check_reflection(pair, km, km, ReflectionEq::re2, samples,
                                      Rng::seeded(cfg.rng_seed + 201), tol));
    KMatrix kbar = make_K_pair_SNP(km, sp);
    checks.push_back(check_reflection(pair, kbar, km, ReflectionEq::re4, samples,
                                      Rng::seeded(cfg.rng_seed + 202), tol));
    checks.push_back(check_reflection(pair, kp_base, kp_base, ReflectionEq::re_plus_SNP_ss,
                                      samples, Rng::seeded(cfg.rng_seed + 203), tol));
    checks.push_back(check_reflection(pair, kp_base, kp_base, ReflectionEq::re_plus_SNP_sb,
                                      samples, Rng::seeded(cfg.rng_seed + 204), tol));
  }

  // Chain checks.
  ChainConfig chain = cfg.chain_config();
  TransferFamily tf = build_transfer(chain);
  checks.push_back(check_commuting_family(tf, std::min(5, std::max(2, samples / 5)),
                                          std::max(tol, 1e-9)));
  if (opts.exhaustive && chain.L <= 2)
    checks.push_back(check_commuting_family_exhaustive(tf, std::max(tol, 1e-9)));
  if (km.spec.xi_infinite && kp_base.spec.xi_infinite)
    checks.push_back(check_crossing(tf, tol));
  checks.push_back(check_monodromy_exchange(chain, std::max(2, samples / 8),
                                            Rng::seeded(cfg.rng_seed + 301), std::max(tol, 1e-9)));
  try {
    auto gens = build_symmetry_generators(chain);
    checks.push_back(check_symmetry(tf, gens, std::max(2, samples / 8),
                                    Rng::seeded(cfg.rng_seed + 302), std::max(tol, 1e-9)));
  } catch (const std::invalid_argument&) {
    // symmetry extraction unsupported for this boundary; not a failure
  }
  checks.push_back(check_pseudo_vacuum(tf, cfg.diagram(), std::max(3, samples / 5),
                                       Rng::seeded(cfg.rng_seed + 303), std::max(tol, 1e-9)));

  out.checks = std::move(checks);
  out.wall_ms = watch.ms();
  write_report(out, cfg.out_path);
  return out.all_pass() ? 0 : 1;
}

int cmd_spectrum(const RunConfig& cfg, SuiteReport& out, const CommandOptions&) {
  Stopwatch watch;
  out.suite = "spectrum";
  out.config = config_echo(cfg);
  ChainConfig chain = cfg.chain_config();
  TransferFamily tf = build_transfer(chain);
  DynkinDiagram dg = cfg.diagram();

  auto eigs = diagonalize_transfer(tf, Rng::seeded(cfg.rng_seed + 401));
  auto lines = group_spectrum(eigs);
  out.checks.push_back(check_pseudo_vacuum(tf, dg, std::max(3, cfg.samples / 5),
                                           Rng::seeded(cfg.rng_seed + 402),
                                           std::max(cfg.tolerance, 1e-9)));
  // Completeness of the diagonalisation is structural.
  CheckRecord dim_check;
  dim_check.id = "spectrum.eigenbasis_complete";
  dim_check.residual = std::abs(static_cast<double>(eigs.size()) - chain.chain_dim());
  dim_check.tolerance = 0.5;
  dim_check.pass = dim_check.residual < 0.5;
  out.checks.push_back(dim_check);

  json spectra = json::array();
  for (auto& line : lines) {
    json lj;
    lj["multiplicity"] = line.multiplicity;
    json coeffs = json::array();
    for (auto& c : line.Lambda.c) coeffs.push_back(complex_to_json(c));
    lj["coefficients"] = coeffs;
    spectra.push_back(lj);
  }
  out.extra["spectrum"] = spectra;

  // Symmetry quantum numbers of the SNP folding, where defined.
  if (cfg.variant == BoundaryVariant::SNP && cfg.basis == BasisKind::plain) {
    auto carts = snp_cartan_generators(chain.space, chain.sites());
    json qn = json::array();
    for (auto& line : lines) {
      json per_line = json::array();
      for (int m : line.members) {
        cplx nn = eigs[m].vector.adjoint() * eigs[m].vector;
        json vals = json::array();
        for (auto& s : carts) {
          cplx v = eigs[m].vector.adjoint() * s * eigs[m].vector;
          vals.push_back((v / nn).real());
        }
        per_line.push_back(vals);
      }
      qn.push_back(per_line);
    }
    out.extra["cartan_expectations"] = qn;
  }

  out.wall_ms = watch.ms();
  if (cfg.format == "csv") {
    std::vector<int> no_match(lines.size(), -1);
    if (!cfg.out_path.empty()) {
      std::ofstream os(cfg.out_path);
      if (!os) throw std::runtime_error("cannot write CSV to " + cfg.out_path);
      os << spectrum_csv(lines, no_match);
    }
  } else {
    write_report(out, cfg.out_path);
  }
  return out.all_pass() ? 0 : 1;
}

int cmd_bethe(const RunConfig& cfg, SuiteReport& out, const CommandOptions&) {
  Stopwatch watch;
  out.suite = "bethe";
  out.config = config_echo(cfg);
  ChainConfig chain = cfg.chain_config();
  GradedSpace sp = chain.space;
  DynkinDiagram dg = cfg.diagram();
  TransferFamily tf = build_transfer(chain);

  auto eigs = diagonalize_transfer(tf, Rng::seeded(cfg.rng_seed + 501));
  auto lines = group_spectrum(eigs);

  BetheSolveOptions opts;
  opts.seeds = cfg.seeds;
  opts.max_total_roots = cfg.max_total_roots;
  auto result = solve_bethe(sp, dg, cfg.variant, cfg.L, chain.Kminus, cfg.counts,
                            Rng::seeded(cfg.rng_seed + 502), opts);

  std::vector<DressedEigenvalue> cands;
  BetheRootSet vacuum;
  vacuum.roots.assign(bethe_rank(sp, dg, cfg.variant), {});
  cands.push_back(dressed_eigenvalue(sp, dg, cfg.variant, cfg.L, chain.Kminus, vacuum));
  cands.back().label = "pseudo-vacuum";
  for (size_t s = 0; s < result.solutions.size(); ++s) {
    cands.push_back(
        dressed_eigenvalue(sp, dg, cfg.variant, cfg.L, chain.Kminus, result.solutions[s]));
    cands.back().label = "solution " + std::to_string(s);
  }
  auto rep = match_spectrum(lines, cands);

  json solutions = json::array();
  for (auto& s : result.solutions) {
    json roots = json::array();
    for (auto& lvl : s.roots) {
      json lj = json::array();
      for (auto& r : lvl) lj.push_back(complex_to_json(r));
      roots.push_back(lj);
    }
    json res = json::array();
    for (cplx r : bethe_residuals(sp, dg, cfg.variant, cfg.L, chain.Kminus, s))
      res.push_back(complex_to_json(r));
    solutions.push_back({{"roots", roots}, {"residuals", res}});
  }
  out.extra["solutions"] = solutions;
  out.extra["attempted_seeds"] = result.attempted;
  out.extra["converged_runs"] = result.converged;

  json matches = json::array();
  for (auto& e : rep.entries)
    matches.push_back({{"candidate", e.candidate},
                       {"label", cands[e.candidate].label},
                       {"line", e.line},
                       {"distance", e.distance},
                       {"analytic", e.analytic}});
  out.extra["matches"] = matches;
  out.extra["completeness"] = rep.completeness;

  // Soundness: every converged solution must match an ED line.
  CheckRecord sound;
  sound.id = "bethe.soundness";
  double worst = 0.0;
  for (auto& e : rep.entries)
    if (e.line < 0 && e.candidate > 0) worst = std::max(worst, e.distance);
  sound.residual = worst;
  sound.tolerance = 1e-7;
  sound.pass = worst < 1e-7;
  sound.metadata["solutions"] = std::to_string(result.solutions.size());
  sound.metadata["completeness"] = std::to_string(rep.completeness);
  out.checks.push_back(sound);

  out.wall_ms = watch.ms();
  write_report(out, cfg.out_path);
  return out.all_pass() ? 0 : 1;
}

int cmd_fusion(const RunConfig& cfg, SuiteReport& out, const CommandOptions&) {
  Stopwatch watch;
  out.suite = "fusion";
  out.config = config_echo(cfg);
  ChainConfig chain = cfg.chain_config();
  GradedSpace sp = chain.space;
  auto pair = build_scattering(sp);

  out.checks.push_back(check_projector_identities(pair, std::max(3, cfg.samples / 5),
                                                  Rng::seeded(cfg.rng_seed + 601),
                                                  cfg.tolerance));
  out.checks.push_back(check_quantum_determinants(chain, std::max(3, cfg.samples / 5),
                                                  Rng::seeded(cfg.rng_seed + 602),
                                                  cfg.tolerance));
  out.checks.push_back(check_fusion_identity(chain, std::max(3, cfg.samples / 8),
                                             Rng::seeded(cfg.rng_seed + 603),
                                             std::max(cfg.tolerance, 1e-8)));
  out.checks.push_back(check_fused_commutation(chain, std::max(2, cfg.samples / 8),
                                               Rng::seeded(cfg.rng_seed + 604),
                                               std::max(cfg.tolerance, 1e-9)));
  if (sp.kind == BasisKind::plain && cfg.variant == BoundaryVariant::SP && sp.dim <= 3)
    out.checks.push_back(check_generalized_fusion(chain, std::max(2, cfg.samples / 8),
                                                  Rng::seeded(cfg.rng_seed + 605),
                                                  std::max(cfg.tolerance, 1e-8)));

  out.wall_ms = watch.ms();
  write_report(out, cfg.out_path);
  return out.all_pass() ? 0 : 1;
}

}  // namespace reflectchain
