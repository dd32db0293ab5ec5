#include <doctest.h>

#include <cstdlib>

#include "reflectchain/cli.hpp"

using namespace reflectchain;

TEST_CASE("config parsing is strict") {
  json j = {{"algebra", {{"M", 2}, {"N", 1}, {"basis", "distinguished"}, {"theta0", 1}}},
            {"chain", {{"variant", "SP"}, {"L", 1}}},
            {"checks", {{"rng_seed", 7}, {"samples", 8}}}};
  auto cfg = parse_run_config(j);
  CHECK(cfg.M == 2);
  CHECK(cfg.N == 1);
  CHECK(cfg.rng_seed == 7);

  json bad = j;
  bad["algebra"]["bogus"] = 1;
  CHECK_THROWS_AS(parse_run_config(bad), std::invalid_argument);
  json bad2 = j;
  bad2["typo_section"] = json::object();
  CHECK_THROWS_AS(parse_run_config(bad2), std::invalid_argument);
  json bad3 = j;
  bad3["output"] = {{"format", "xml"}};
  CHECK_THROWS_AS(parse_run_config(bad3), std::invalid_argument);
}

TEST_CASE("boundary specs round-trip through the config") {
  json j = {{"algebra", {{"M", 3}, {"N", 0}, {"basis", "plain"}, {"theta0", 1}}},
            {"chain", {{"variant", "SP"}, {"L", 1}}},
            {"boundary",
             {{"minus-spec",
               {{"variant", "SP"}, {"xi", json::array({0.8, 0.1})},
                {"signature", json::array({-1, 1, 1})}}}}}};
  auto cfg = parse_run_config(j);
  GradedSpace sp = cfg.space();
  KMatrix km = cfg.K_minus(sp);
  CHECK(std::abs(km.spec.xi - cplx(0.8, 0.1)) < 1e-14);
  CHECK(km.poly.degree() == 1);
  CHECK(std::abs(km.poly.c[1](0, 0) - cplx(-1.0, 0.0)) < 1e-14);

  json j2 = {{"algebra", {{"M", 3}, {"N", 0}, {"basis", "plain"}, {"theta0", 1}}},
             {"chain", {{"variant", "SNP"}, {"L", 1}}},
             {"boundary",
              {{"minus-spec", {{"variant", "SNP"}, {"k_list", json::array({2.0, 1.0, 2.0})}}}}}};
  auto cfg2 = parse_run_config(j2);
  KMatrix km2 = cfg2.K_minus(cfg2.space());
  CHECK(km2.constant());
  CHECK(std::abs(km2.poly.c[0](0, 0) - cplx(2.0, 0.0)) < 1e-14);
  // echo preserves the boundary block
  json echo = config_echo(cfg2);
  CHECK(echo["boundary"]["minus-spec"]["k_list"][0] == 2.0);
}

TEST_CASE("verify command: pass and fault exit codes") {
  json j = {{"algebra", {{"M", 2}, {"N", 0}, {"basis", "plain"}, {"theta0", 1}}},
            {"chain", {{"variant", "SP"}, {"L", 1}}},
            {"checks", {{"rng_seed", 5}, {"samples", 6}}}};
  auto cfg = parse_run_config(j);
  SuiteReport rep;
  CHECK(cmd_verify(cfg, rep) == 0);
  CHECK(rep.all_pass());
  CHECK(rep.checks.size() > 8);

  json jf = j;
  jf["checks"]["fault_injection"] = true;
  auto cfgf = parse_run_config(jf);
  SuiteReport repf;
  CHECK(cmd_verify(cfgf, repf) == 1);
  CHECK(!repf.all_pass());

  // invalid configuration surfaces as std::invalid_argument (exit 2 in main)
  json jb = j;
  jb["algebra"]["M"] = 2;
  jb["algebra"]["N"] = 2;
  jb["algebra"]["basis"] = "distinguished";
  auto cfgb = parse_run_config(jb);
  CHECK_THROWS_AS(cfgb.space(), std::invalid_argument);
}

TEST_CASE("reports are deterministic for a fixed config and seed") {
  json j = {{"algebra", {{"M", 2}, {"N", 1}, {"basis", "distinguished"}, {"theta0", 1}}},
            {"chain", {{"variant", "SP"}, {"L", 1}}},
            {"checks", {{"rng_seed", 11}, {"samples", 6}}}};
  auto cfg = parse_run_config(j);
  SuiteReport a, b;
  cmd_verify(cfg, a);
  cmd_verify(cfg, b);
  json ja = a.to_json(), jb = b.to_json();
  ja.erase("timing");
  jb.erase("timing");
  CHECK(ja == jb);
}

TEST_CASE("bethe command emits solutions, residuals and the match table") {
  json j = {{"algebra", {{"M", 2}, {"N", 0}, {"basis", "plain"}, {"theta0", 1}}},
            {"chain", {{"variant", "SP"}, {"L", 2}}},
            {"bethe", {{"counts", json::array({1})}, {"seeds", 24}}},
            {"checks", {{"rng_seed", 3}}}};
  auto cfg = parse_run_config(j);
  SuiteReport rep;
  CHECK(cmd_bethe(cfg, rep) == 0);
  CHECK(rep.extra["solutions"].size() == 1);
  CHECK(rep.extra["completeness"].get<double>() == doctest::Approx(1.0));
  // counts 0: pseudo-vacuum only
  json j0 = j;
  j0["bethe"]["counts"] = json::array();
  SuiteReport rep0;
  CHECK(cmd_bethe(parse_run_config(j0), rep0) == 0);
  for (auto& m : rep0.extra["matches"]) CHECK(m["line"].get<int>() >= 0);
}

TEST_CASE("spectrum command and CSV export") {
  json j = {{"algebra", {{"M", 2}, {"N", 0}, {"basis", "plain"}, {"theta0", 1}}},
            {"chain", {{"variant", "SP"}, {"L", 2}}},
            {"checks", {{"rng_seed", 13}}}};
  auto cfg = parse_run_config(j);
  SuiteReport rep;
  CHECK(cmd_spectrum(cfg, rep) == 0);
  CHECK(rep.extra["spectrum"].size() == 2);

  std::vector<SpectrumLine> lines(2);
  lines[0].Lambda = ScalarPoly({1.0, 2.0 * I});
  lines[0].multiplicity = 3;
  lines[1].Lambda = ScalarPoly({-1.0});
  lines[1].multiplicity = 1;
  auto csv = spectrum_csv(lines, {0, -1});
  CHECK(csv.find("multiplicity,matched_candidate") == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("dimension cap honours the environment override") {
  json j = {{"algebra", {{"M", 2}, {"N", 0}, {"basis", "plain"}, {"theta0", 1}}},
            {"chain", {{"variant", "SP"}, {"L", 4}}}};
  auto cfg = parse_run_config(j);
  setenv("REFLECTCHAIN_DIM_CAP", "8", 1);
  CHECK_THROWS_AS(cfg.chain_config(), std::invalid_argument);
  unsetenv("REFLECTCHAIN_DIM_CAP");
  CHECK_NOTHROW(cfg.chain_config());
}

TEST_CASE("fusion command") {
  json j = {{"algebra", {{"M", 2}, {"N", 0}, {"basis", "plain"}, {"theta0", 1}}},
            {"chain", {{"variant", "SP"}, {"L", 1}}},
            {"checks", {{"rng_seed", 17}, {"samples", 8}}}};
  SuiteReport rep;
  CHECK(cmd_fusion(parse_run_config(j), rep) == 0);
  CHECK(rep.checks.size() >= 4);
}
