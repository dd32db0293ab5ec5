#pragma once

#include <json.hpp>

#include "reflectchain/spectrum.hpp"

namespace reflectchain {

using json = nlohmann::json;

/// Full run configuration, parsed strictly: unknown fields are rejected so a
/// typo cannot silently change the physics.
struct RunConfig {
  // algebra
  int M = 2;
  int N = 0;
  BasisKind basis = BasisKind::plain;
  int theta0 = 1;
  // chain
  BoundaryVariant variant = BoundaryVariant::SP;
  int L = 1;
  // boundary specs (parsed lazily into KMatrix against the space)
  json boundary_minus;  // empty = identity
  json boundary_plus;   // empty = identity
  // diagram
  std::vector<int> grey_positions;  // empty = canonical diagram of the basis
  // bethe
  std::vector<int> counts;
  int seeds = 64;
  int max_total_roots = 6;
  // checks
  double tolerance = 1e-10;
  int samples = 25;
  std::uint64_t rng_seed = 20240612;
  int dim_cap = 2000;
  bool fault_injection = false;
  // output
  std::string out_path;
  std::string format = "json";

  GradedSpace space() const;
  DynkinDiagram diagram() const;
  KMatrix K_minus(const GradedSpace& sp) const;
  KMatrix K_plus_base(const GradedSpace& sp) const;
  ChainConfig chain_config() const;
};

RunConfig parse_run_config(const json& j);
RunConfig load_run_config(const std::string& path);
json config_echo(const RunConfig& cfg);

json to_json(const CheckRecord& rec);
json complex_to_json(cplx z);

struct SuiteReport {
  std::string suite;
  std::vector<CheckRecord> checks;
  json extra;  // suite-specific payload (spectra, matches, ...)
  json config;
  double wall_ms = 0.0;

  bool all_pass() const;
  json to_json() const;
};

void write_report(const SuiteReport& rep, const std::string& path);

/// Spectrum lines as CSV: multiplicity, matched candidate id, then the
/// eigenvalue coefficients as re/im pairs.
std::string spectrum_csv(const std::vector<SpectrumLine>& lines,
                         const std::vector<int>& matched_candidate);

}  // namespace reflectchain
