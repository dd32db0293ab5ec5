#include "reflectchain/report.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace reflectchain {

namespace {

void require_keys(const json& j, const std::string& where,
                  const std::vector<std::string>& allowed) {
  if (!j.is_object()) throw std::invalid_argument(where + ": expected an object");
  for (auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw std::invalid_argument(where + ": unknown field '" + key + "'");
  }
}

cplx parse_complex(const json& j, const std::string& where) {
  if (j.is_number()) return cplx(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2) return cplx(j[0].get<double>(), j[1].get<double>());
  throw std::invalid_argument(where + ": expected a number or [re, im]");
}

Mat parse_matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument(where + ": expected a matrix");
  const int n = static_cast<int>(j.size());
  Mat m(n, n);
  for (int r = 0; r < n; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != n)
      throw std::invalid_argument(where + ": expected a square matrix");
    for (int c = 0; c < n; ++c) m(r, c) = parse_complex(j[r][c], where);
  }
  return m;
}

}  // namespace

GradedSpace RunConfig::space() const { return make_graded_space(M, N, basis, theta0); }

DynkinDiagram RunConfig::diagram() const {
  GradedSpace sp = space();
  if (grey_positions.empty()) return diagram_for_space(sp);
  DynkinDiagram dg = make_dynkin_diagram(sp.dim, grey_positions);
  if (dg.parities != sp.parity)
    throw std::invalid_argument("diagram grey positions are inconsistent with the basis grading");
  return dg;
}

namespace {

KMatrix parse_boundary(const json& j, const GradedSpace& sp, BoundaryVariant chain_variant,
                       BoundarySide side) {
  if (j.is_null() || j.empty()) return make_K_identity(sp, chain_variant, side);
  require_keys(j, "boundary", {"variant", "side", "xi", "signature", "U", "k_list"});
  BoundaryVariant variant = chain_variant;
  if (j.contains("variant")) {
    std::string v = j["variant"].get<std::string>();
    if (v == "SP") variant = BoundaryVariant::SP;
    else if (v == "SNP") variant = BoundaryVariant::SNP;
    else throw std::invalid_argument("boundary.variant must be SP or SNP");
  }
  if (variant != chain_variant)
    throw std::invalid_argument("boundary variant must match the chain variant");
  if (variant == BoundaryVariant::SNP) {
    if (!j.contains("k_list")) return make_K_identity(sp, variant, side);
    Mat k = Mat::Zero(sp.dim, sp.dim);
    auto kl = j["k_list"];
    if (static_cast<int>(kl.size()) != sp.dim)
      throw std::invalid_argument("boundary.k_list length must equal the dimension");
    for (int i = 0; i < sp.dim; ++i) k(i, i) = parse_complex(kl[i], "boundary.k_list");
    KMatrix km = make_K_SNP(sp, k);
    km.spec.side = side;
    return km;
  }
  if (j.contains("xi") && j["xi"].is_string()) {
    if (j["xi"].get<std::string>() != "infinite")
      throw std::invalid_argument("boundary.xi must be a number, [re,im] or \"infinite\"");
    return make_K_identity(sp, variant, side);
  }
  cplx xi = j.contains("xi") ? parse_complex(j["xi"], "boundary.xi") : cplx(1.0, 0.0);
  std::vector<int> sig(sp.dim, 1);
  if (j.contains("signature")) {
    auto sj = j["signature"];
    if (static_cast<int>(sj.size()) != sp.dim)
      throw std::invalid_argument("boundary.signature length must equal the dimension");
    for (int i = 0; i < sp.dim; ++i) sig[i] = sj[i].get<int>();
  }
  std::optional<Mat> U;
  if (j.contains("U")) U = parse_matrix(j["U"], "boundary.U");
  KMatrix km = make_K_SP(sp, xi, sig, U);
  km.spec.side = side;
  return km;
}

}  // namespace

KMatrix RunConfig::K_minus(const GradedSpace& sp) const {
  return parse_boundary(boundary_minus, sp, variant, BoundarySide::minus);
}

KMatrix RunConfig::K_plus_base(const GradedSpace& sp) const {
  // The plus side is specified through its minus-side base matrix; the chain
  // builder applies the dual substitution lambda -> -lambda - i rho.
  return parse_boundary(boundary_plus, sp, variant, BoundarySide::minus);
}

ChainConfig RunConfig::chain_config() const {
  GradedSpace sp = space();
  int cap = dim_cap;
  if (const char* env = std::getenv("REFLECTCHAIN_DIM_CAP")) cap = std::atoi(env);
  return make_chain_config(sp, variant, L, K_minus(sp), K_plus_base(sp), cap);
}

RunConfig parse_run_config(const json& j) {
  require_keys(j, "config",
               {"algebra", "chain", "boundary", "diagram", "bethe", "checks", "output"});
  RunConfig cfg;
  if (j.contains("algebra")) {
    const json& a = j["algebra"];
    require_keys(a, "algebra", {"M", "N", "basis", "theta0"});
    if (a.contains("M")) cfg.M = a["M"].get<int>();
    if (a.contains("N")) cfg.N = a["N"].get<int>();
    if (a.contains("basis")) cfg.basis = basis_kind_from_string(a["basis"].get<std::string>());
    if (a.contains("theta0")) cfg.theta0 = a["theta0"].get<int>();
  }
  if (j.contains("chain")) {
    const json& c = j["chain"];
    require_keys(c, "chain", {"variant", "L"});
    if (c.contains("variant")) {
      std::string v = c["variant"].get<std::string>();
      if (v == "SP") cfg.variant = BoundaryVariant::SP;
      else if (v == "SNP") cfg.variant = BoundaryVariant::SNP;
      else throw std::invalid_argument("chain.variant must be SP or SNP");
    }
    if (c.contains("L")) cfg.L = c["L"].get<int>();
  }
  if (j.contains("boundary")) {
    const json& b = j["boundary"];
    require_keys(b, "boundary", {"minus-spec", "plus-spec"});
    if (b.contains("minus-spec")) cfg.boundary_minus = b["minus-spec"];
    if (b.contains("plus-spec")) cfg.boundary_plus = b["plus-spec"];
  }
  if (j.contains("diagram")) {
    const json& d = j["diagram"];
    require_keys(d, "diagram", {"grey_positions"});
    if (d.contains("grey_positions"))
      cfg.grey_positions = d["grey_positions"].get<std::vector<int>>();
  }
  if (j.contains("bethe")) {
    const json& b = j["bethe"];
    require_keys(b, "bethe", {"counts", "seeds", "max_total_roots"});
    if (b.contains("counts")) cfg.counts = b["counts"].get<std::vector<int>>();
    if (b.contains("seeds")) cfg.seeds = b["seeds"].get<int>();
    if (b.contains("max_total_roots")) cfg.max_total_roots = b["max_total_roots"].get<int>();
  }
  if (j.contains("checks")) {
    const json& c = j["checks"];
    require_keys(c, "checks",
                 {"tolerance", "samples", "rng_seed", "dim_cap", "fault_injection"});
    if (c.contains("tolerance")) cfg.tolerance = c["tolerance"].get<double>();
    if (c.contains("samples")) cfg.samples = c["samples"].get<int>();
    if (c.contains("rng_seed")) cfg.rng_seed = c["rng_seed"].get<std::uint64_t>();
    if (c.contains("dim_cap")) cfg.dim_cap = c["dim_cap"].get<int>();
    if (c.contains("fault_injection")) cfg.fault_injection = c["fault_injection"].get<bool>();
  }
  if (j.contains("output")) {
    const json& o = j["output"];
    require_keys(o, "output", {"path", "format"});
    if (o.contains("path")) cfg.out_path = o["path"].get<std::string>();
    if (o.contains("format")) cfg.format = o["format"].get<std::string>();
  }
  if (cfg.format != "json" && cfg.format != "csv")
    throw std::invalid_argument("output.format must be json or csv");
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  json j;
  in >> j;
  return parse_run_config(j);
}

json config_echo(const RunConfig& cfg) {
  json j;
  j["algebra"] = {{"M", cfg.M}, {"N", cfg.N}, {"basis", to_string(cfg.basis)},
                  {"theta0", cfg.theta0}};
  j["chain"] = {{"variant", to_string(cfg.variant)}, {"L", cfg.L}};
  json b;
  if (!cfg.boundary_minus.empty()) b["minus-spec"] = cfg.boundary_minus;
  if (!cfg.boundary_plus.empty()) b["plus-spec"] = cfg.boundary_plus;
  j["boundary"] = b;
  j["diagram"] = {{"grey_positions", cfg.grey_positions}};
  j["bethe"] = {{"counts", cfg.counts}, {"seeds", cfg.seeds},
                {"max_total_roots", cfg.max_total_roots}};
  j["checks"] = {{"tolerance", cfg.tolerance}, {"samples", cfg.samples},
                 {"rng_seed", cfg.rng_seed}, {"dim_cap", cfg.dim_cap},
                 {"fault_injection", cfg.fault_injection}};
  j["output"] = {{"path", cfg.out_path}, {"format", cfg.format}};
  return j;
}

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json to_json(const CheckRecord& rec) {
  json j;
  j["id"] = rec.id;
  j["residual"] = rec.residual;
  j["tolerance"] = rec.tolerance;
  j["pass"] = rec.pass;
  j["metadata"] = rec.metadata;
  return j;
}

bool SuiteReport::all_pass() const {
  for (auto& c : checks)
    if (!c.pass) return false;
  return true;
}

json SuiteReport::to_json() const {
  json j;
  j["suite"] = suite;
  j["config"] = config;
  j["versions"] = {{"reflectchain", "1.0.0"},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                 std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION)}};
  json cj = json::array();
  for (auto& c : checks) cj.push_back(reflectchain::to_json(c));
  j["checks"] = cj;
  j["pass"] = all_pass();
  if (!extra.is_null()) j["results"] = extra;
  j["timing"] = {{"wall_ms", wall_ms}};
  return j;
}

void write_report(const SuiteReport& rep, const std::string& path) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write report to " + path);
  out << rep.to_json().dump(2) << "\n";
}

std::string spectrum_csv(const std::vector<SpectrumLine>& lines,
                         const std::vector<int>& matched_candidate) {
  std::ostringstream os;
  size_t maxdeg = 0;
  for (auto& l : lines) maxdeg = std::max(maxdeg, l.Lambda.c.size());
  os << "multiplicity,matched_candidate";
  for (size_t d = 0; d < maxdeg; ++d) os << ",c" << d << "_re,c" << d << "_im";
  os << "\n";
  for (size_t k = 0; k < lines.size(); ++k) {
    os << lines[k].multiplicity << ","
       << (k < matched_candidate.size() ? matched_candidate[k] : -1);
    for (size_t d = 0; d < maxdeg; ++d) {
      cplx c = d < lines[k].Lambda.c.size() ? lines[k].Lambda.c[d] : cplx(0.0);
      os << "," << c.real() << "," << c.imag();
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace reflectchain
