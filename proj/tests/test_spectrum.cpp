#include <doctest.h>

#include "reflectchain/spectrum.hpp"

using namespace reflectchain;

namespace {

BetheRootSet random_roots(Rng& rng, const std::vector<int>& counts) {
  BetheRootSet rs;
  for (int c : counts) {
    std::vector<cplx> lvl;
    for (int j = 0; j < c; ++j)
      lvl.push_back(cplx(rng.uniform(0.3, 1.9), rng.uniform(-0.4, 0.4)));
    rs.roots.push_back(lvl);
  }
  return rs;
}

}  // namespace

TEST_CASE("Dynkin diagrams: parities, delta ladder, root products") {
  auto dg = make_dynkin_diagram(3, {2});  // distinguished sl(2|1)
  CHECK(dg.parities == std::vector<int>{0, 0, 1});
  CHECK(dg.delta == std::vector<int>{0, 1, 1});
  CHECK(dg.M == 2);
  CHECK(dg.N == 1);
  CHECK(dg.root_product(1, 1) == 2);
  CHECK(dg.root_product(2, 2) == 0);  // grey node is isotropic

  auto sym = make_dynkin_diagram(5, {1, 4});  // symmetric sl(3|2)
  CHECK(sym.parities == std::vector<int>{0, 1, 1, 1, 0});
  CHECK(sym.delta == std::vector<int>{0, 0, -1, -2, -2});

  CHECK_THROWS_AS(make_dynkin_diagram(3, {3}), std::invalid_argument);
  CHECK_THROWS_AS(make_dynkin_diagram(3, {1, 1}), std::invalid_argument);
}

TEST_CASE("g-functions: distinguished, SNP and crossing completion") {
  cplx x(0.63, 0.21);
  {
    auto sp = make_graded_space(2, 1, BasisKind::distinguished, +1);
    auto g = g_functions(sp, diagram_for_space(sp), BoundaryVariant::SP,
                         make_K_identity(sp, BoundaryVariant::SP));
    CHECK(std::abs(g[0].eval(x) - 1.0) < 1e-13);
    CHECK(std::abs(g[1].eval(x) - x / (x + I)) < 1e-13);
    CHECK(std::abs(g[2].eval(x) - x / (x + I)) < 1e-13);
  }
  {
    auto sp = make_graded_space(3, 0, BasisKind::plain, +1);
    auto g = g_functions(sp, diagram_for_space(sp), BoundaryVariant::SNP,
                         make_K_identity(sp, BoundaryVariant::SNP));
    CHECK(std::abs(g[0].eval(x) - (x + 0.25 * I) / (x + 0.75 * I)) < 1e-13);
    CHECK(std::abs(g[1].eval(x) - 1.0) < 1e-13);
    for (int l = 0; l < 3; ++l)
      CHECK(std::abs(g[l].eval(x) - g[2 - l].eval(-x - I * sp.rho)) < 1e-13);
  }
  {
    // symmetric-diagram g's agree with the explicit three-branch form
    auto sp = make_graded_space(3, 2, BasisKind::symmetric, -1);
    auto g = g_functions(sp, diagram_for_space(sp), BoundaryVariant::SP,
                         make_K_identity(sp, BoundaryVariant::SP));
    int M = sp.M, Ntot = sp.dim, n = sp.N / 2;
    double mn = (sp.M - sp.N) / 2.0;
    for (int l = 0; l < Ntot; ++l) {
      cplx expect;
      if (l < n)
        expect = x * (x + I * mn) / ((x + 0.5 * I * cplx(l)) * (x + 0.5 * I * cplx(l + 1)));
      else if (l < M + n)
        expect = x * (x + I * mn) /
                 ((x + 0.5 * I * cplx(sp.N - l - 1)) * (x + 0.5 * I * cplx(sp.N - l)));
      else
        expect = x * (x + I * mn) /
                 ((x + 0.5 * I * cplx(l - 2 * M)) * (x + 0.5 * I * cplx(l - 2 * M + 1)));
      CHECK(std::abs(g[l].eval(x) - expect) < 1e-12);
    }
  }
  {
    // distinguished-diagram g's agree with the explicit two-branch form
    auto sp = make_graded_space(3, 2, BasisKind::distinguished, +1);
    auto g = g_functions(sp, diagram_for_space(sp), BoundaryVariant::SP,
                         make_K_identity(sp, BoundaryVariant::SP));
    int M = sp.M;
    double mn = (sp.M - sp.N) / 2.0;
    for (int l = 0; l < sp.dim; ++l) {
      cplx expect;
      if (l < M)
        expect = x * (x + I * mn) / ((x + 0.5 * I * cplx(l)) * (x + 0.5 * I * cplx(l + 1)));
      else
        expect = x * (x + I * mn) /
                 ((x + 0.5 * I * cplx(2 * M - l - 1)) * (x + 0.5 * I * cplx(2 * M - l)));
      CHECK(std::abs(g[l].eval(x) - expect) < 1e-12);
    }
  }
  // boundary modification: g~_0 = (-lambda + i xi) g_0 for m1 >= 1
  {
    auto sp = make_graded_space(2, 0, BasisKind::plain, +1);
    cplx xi(0.9, 0.3);
    auto K = make_K_SP(sp, xi, {-1, 1});
    auto g0 = g_functions(sp, diagram_for_space(sp), BoundaryVariant::SP,
                          make_K_identity(sp, BoundaryVariant::SP));
    auto gt = g_functions(sp, diagram_for_space(sp), BoundaryVariant::SP, K);
    CHECK(std::abs(gt[0].eval(x) - (-x + I * xi) * g0[0].eval(x)) < 1e-12);
    CHECK(std::abs(gt[1].eval(x) - (x + I * xi + I) * g0[1].eval(x)) < 1e-12);
  }
  // unsupported boundaries are rejected
  {
    auto sp = make_graded_space(3, 0, BasisKind::plain, +1);
    Mat sigma = Mat::Zero(3, 3);
    sigma(0, 2) = 1.0;
    auto Kn = make_K_SP_nilpotent(sp, 1.0, sigma);
    CHECK_THROWS_AS(g_functions(sp, diagram_for_space(sp), BoundaryVariant::SP, Kn),
                    std::invalid_argument);
    auto sl2m = make_graded_space(2, 0, BasisKind::plain, -1);
    Mat anti = Mat::Zero(2, 2);
    anti(0, 0) = 1.0;
    anti(1, 1) = -1.0;
    auto Ka = make_K_SNP(sl2m, anti);
    CHECK_THROWS_AS(g_functions(sl2m, diagram_for_space(sl2m), BoundaryVariant::SNP, Ka),
                    std::invalid_argument);
  }
}

TEST_CASE("pseudo-vacuum eigenvalue closed forms") {
  cplx x(0.63, 0.21);
  auto sl2 = make_graded_space(2, 0, BasisKind::plain, +1);
  auto lam2 = pseudo_vacuum_eigenvalue(sl2, diagram_for_space(sl2), BoundaryVariant::SP, 1,
                                       make_K_identity(sl2, BoundaryVariant::SP));
  CHECK(std::abs(lam2.eval_unguarded(x) - (2.0 * x * x + 2.0 * I * x - 2.0)) < 1e-12);

  auto sl21 = make_graded_space(2, 1, BasisKind::distinguished, +1);
  auto lam3 = pseudo_vacuum_eigenvalue(sl21, diagram_for_space(sl21), BoundaryVariant::SP, 1,
                                       make_K_identity(sl21, BoundaryVariant::SP));
  CHECK(std::abs(lam3.eval_unguarded(x) - (x + I) * (x + I)) < 1e-12);
}

TEST_CASE("pseudo-vacuum is an exact eigenstate across variants and boundaries") {
  Rng rng = Rng::seeded(5);
  struct Cfg {
    GradedSpace sp;
    BoundaryVariant v;
    int L;
    KMatrix K;
  };
  std::vector<Cfg> cfgs;
  {
    auto sp = make_graded_space(2, 0, BasisKind::plain, +1);
    cfgs.push_back({sp, BoundaryVariant::SP, 2, make_K_identity(sp, BoundaryVariant::SP)});
    cfgs.push_back({sp, BoundaryVariant::SP, 2, make_K_SP(sp, cplx(0.8, 0.1), {-1, 1})});
    cfgs.push_back({sp, BoundaryVariant::SNP, 2, make_K_identity(sp, BoundaryVariant::SNP)});
  }
  {
    auto sp = make_graded_space(2, 1, BasisKind::distinguished, +1);
    cfgs.push_back({sp, BoundaryVariant::SP, 2, make_K_identity(sp, BoundaryVariant::SP)});
    cfgs.push_back({sp, BoundaryVariant::SP, 1, make_K_SP(sp, cplx(0.8, 0.1), {-1, 1, 1})});
  }
  {
    auto sp = make_graded_space(3, 0, BasisKind::plain, +1);
    Mat kt = Mat::Zero(3, 3);
    kt(0, 0) = 1.7;
    kt(1, 1) = 0.6;
    kt(2, 2) = 1.7;
    cfgs.push_back({sp, BoundaryVariant::SNP, 1, make_K_SNP(sp, kt)});
  }
  {
    auto sp = make_graded_space(1, 2, BasisKind::symmetric, -1);
    cfgs.push_back({sp, BoundaryVariant::SNP, 1, make_K_identity(sp, BoundaryVariant::SNP)});
  }
  {
    auto sp = make_graded_space(3, 2, BasisKind::symmetric, -1);
    cfgs.push_back({sp, BoundaryVariant::SNP, 1, make_K_identity(sp, BoundaryVariant::SNP)});
  }
  int i = 0;
  for (auto& c : cfgs) {
    auto id = make_K_identity(c.sp, c.v);
    auto chain = make_chain_config(c.sp, c.v, c.L, c.K, id);
    auto tf = build_transfer(chain);
    auto rec = check_pseudo_vacuum(tf, diagram_for_space(c.sp), 5, rng.fork(100 + i++));
    CHECK(rec.pass);
    CHECK(rec.residual < 1e-9);
  }
}

TEST_CASE("dressing constraint identities at random roots") {
  Rng rng = Rng::seeded(23);
  struct Fam {
    GradedSpace sp;
    BoundaryVariant v;
    std::vector<int> counts;
  };
  std::vector<Fam> fams = {
      {make_graded_space(3, 0, BasisKind::plain, +1), BoundaryVariant::SNP, {1}},
      {make_graded_space(4, 0, BasisKind::plain, +1), BoundaryVariant::SNP, {2, 1}},
      {make_graded_space(2, 1, BasisKind::distinguished, +1), BoundaryVariant::SP, {2, 1}},
      {make_graded_space(1, 2, BasisKind::symmetric, -1), BoundaryVariant::SNP, {2}},
      {make_graded_space(3, 2, BasisKind::symmetric, -1), BoundaryVariant::SNP, {2, 1}},
  };
  for (auto& f : fams) {
    auto dg = diagram_for_space(f.sp);
    const int d = f.sp.dim;
    for (int trial = 0; trial < 10; ++trial) {
      auto rs = random_roots(rng, f.counts);
      if (!rs.valid()) continue;
      auto A = dressing(f.sp, dg, f.v, rs);
      cplx x = rng.sample_lambda();
      CHECK(std::abs(A[0].eval(x) * A[0].eval(-x) - 1.0) < 1e-10);
      if (f.v == BoundaryVariant::SNP) {
        for (int l = 0; l < d; ++l)
          CHECK(std::abs(A[l].eval(x) - A[d - 1 - l].eval(-x - I * f.sp.rho)) < 1e-10);
        CHECK(std::abs(A[0].eval(x + I * f.sp.rho) * A[d - 1].eval(x) - 1.0) < 1e-10);
        if (f.sp.kind == BasisKind::plain) {
          cplx p = 1.0;
          for (int l = 0; l < d; ++l)
            p *= A[l].eval(x + I * static_cast<double>(d - 1) - I * static_cast<double>(l));
          CHECK(std::abs(p - 1.0) < 1e-10);
        } else {
          // product constraint of the generalised fusion, symmetric diagram;
          // the second block's argument observes lambda + i(M-n) - i l
          int n = f.sp.N / 2, M = f.sp.M;
          cplx lhs = 1.0, rhs = 1.0;
          for (int l = 0; l < n; ++l) lhs *= A[l].eval(x - I * static_cast<double>(l));
          for (int l = 0; l < n; ++l)
            lhs *= A[M + n + l].eval(x + I * static_cast<double>(M - n) -
                                     I * static_cast<double>(l));
          for (int l = 0; l < M; ++l)
            rhs *= A[n + l].eval(x - I * static_cast<double>(n - 1) + I * static_cast<double>(l));
          CHECK(std::abs(lhs - rhs) < 1e-10 * std::max(1.0, std::abs(rhs)));
        }
      }
    }
  }
}

TEST_CASE("empty root set gives the identity dressing and no residuals") {
  auto sp = make_graded_space(2, 0, BasisKind::plain, +1);
  auto dg = diagram_for_space(sp);
  BetheRootSet empty;
  empty.roots = {{}};
  auto A = dressing(sp, dg, BoundaryVariant::SP, empty);
  cplx x(0.4, 0.2);
  for (auto& a : A) CHECK(std::abs(a.eval(x) - 1.0) < 1e-14);
  auto res = bethe_residuals(sp, dg, BoundaryVariant::SP, 2,
                             make_K_identity(sp, BoundaryVariant::SP), empty);
  CHECK(res.empty());
}

TEST_CASE("residue-based residuals agree with the explicit sl(2) Bethe equation") {
  auto sp = make_graded_space(2, 0, BasisKind::plain, +1);
  auto dg = diagram_for_space(sp);
  auto id = make_K_identity(sp, BoundaryVariant::SP);
  Rng rng = Rng::seeded(31);
  const int L = 2;
  for (int trial = 0; trial < 6; ++trial) {
    BetheRootSet rs = random_roots(rng, {2});
    if (!rs.valid()) continue;
    auto res = bethe_residuals(sp, dg, BoundaryVariant::SP, L, id, rs);
    REQUIRE(res.size() == 2);
    for (int i = 0; i < 2; ++i) {
      cplx li = rs.roots[0][i], lj = rs.roots[0][1 - i];
      // e_1(l_i)^{2L} = prod_{j != i} e_2(l_i - l_j) e_2(l_i + l_j)
      cplx lhs = std::pow(e_factor(1.0).eval(li), 2 * L);
      cplx rhs = e_factor(2.0).eval(li - lj) * e_factor(2.0).eval(li + lj);
      // the residue ratio is the equation read right-to-left: log(RHS/LHS)
      cplx expect = -std::log(lhs / rhs);
      cplx got = res[i];
      double diff = std::abs(got - expect);
      diff = std::min(diff, std::abs(got - expect - cplx(0.0, 2 * M_PI)));
      diff = std::min(diff, std::abs(got - expect + cplx(0.0, 2 * M_PI)));
      CHECK(diff < 1e-10);
    }
  }
}

TEST_CASE("Bethe roots of the open sl(2) chain and the ED match") {
  auto sp = make_graded_space(2, 0, BasisKind::plain, +1);
  auto dg = diagram_for_space(sp);
  auto id = make_K_identity(sp, BoundaryVariant::SP);
  auto cfg = make_chain_config(sp, BoundaryVariant::SP, 2, id, id);
  auto tf = build_transfer(cfg);
  Rng rng = Rng::seeded(37);
  auto eigs = diagonalize_transfer(tf, rng.fork(1));
  CHECK(static_cast<long>(eigs.size()) == cfg.chain_dim());
  auto lines = group_spectrum(eigs);
  CHECK(lines.size() == 2);

  BetheSolveOptions opts;
  opts.seeds = 32;
  auto sol = solve_bethe(sp, dg, BoundaryVariant::SP, 2, id, {1}, rng.fork(2), opts);
  REQUIRE(sol.solutions.size() == 1);
  CHECK(std::abs(sol.solutions[0].roots[0][0] - cplx(0.5, 0.0)) < 1e-9);

  std::vector<DressedEigenvalue> cands;
  BetheRootSet vac;
  vac.roots = {{}};
  cands.push_back(dressed_eigenvalue(sp, dg, BoundaryVariant::SP, 2, id, vac));
  cands.push_back(dressed_eigenvalue(sp, dg, BoundaryVariant::SP, 2, id, sol.solutions[0]));
  auto rep = match_spectrum(lines, cands);
  CHECK(rep.matched == 2);
  CHECK(rep.completeness == doctest::Approx(1.0));
  CHECK(rep.entries[0].line != rep.entries[1].line);

  // a perturbed root no longer matches (Lambda stops being analytic)
  BetheRootSet bad = sol.solutions[0];
  bad.roots[0][0] += 0.1;
  auto badc = dressed_eigenvalue(sp, dg, BoundaryVariant::SP, 2, id, bad);
  auto rep2 = match_spectrum(lines, {badc});
  CHECK(rep2.matched == 0);

  // duplicate runs of the solver return the same deduplicated set
  auto sol2 = solve_bethe(sp, dg, BoundaryVariant::SP, 2, id, {1}, Rng::seeded(99), opts);
  REQUIRE(sol2.solutions.size() == 1);
  CHECK(std::abs(sol2.solutions[0].roots[0][0] - sol.solutions[0].roots[0][0]) < 1e-8);
}

TEST_CASE("scalar transfer family diagonalises to one line of full multiplicity") {
  auto sp = make_graded_space(2, 0, BasisKind::plain, +1);
  auto id = make_K_identity(sp, BoundaryVariant::SP);
  auto tf = build_transfer(make_chain_config(sp, BoundaryVariant::SP, 1, id, id));
  auto eigs = diagonalize_transfer(tf, Rng::seeded(41));
  auto lines = group_spectrum(eigs);
  REQUIRE(lines.size() == 1);
  CHECK(lines[0].multiplicity == 2);
  ScalarPoly expect({-2.0, 2.0 * I, 2.0});
  CHECK((lines[0].Lambda - expect).norm() < 1e-10);
}

TEST_CASE("SNP folded chain: roots, matches and Cartan quantum numbers") {
  auto sp = make_graded_space(2, 0, BasisKind::plain, -1);
  auto dg = diagram_for_space(sp);
  auto id = make_K_identity(sp, BoundaryVariant::SNP);
  auto cfg = make_chain_config(sp, BoundaryVariant::SNP, 2, id, id);
  auto tf = build_transfer(cfg);
  Rng rng = Rng::seeded(43);
  auto eigs = diagonalize_transfer(tf, rng.fork(1));
  auto lines = group_spectrum(eigs);

  BetheSolveOptions opts;
  opts.seeds = 48;
  auto sol = solve_bethe(sp, dg, BoundaryVariant::SNP, 2, id, {1}, rng.fork(2), opts);
  CHECK(sol.solutions.size() >= 2);
  std::vector<DressedEigenvalue> cands;
  BetheRootSet vac;
  vac.roots = {{}};
  cands.push_back(dressed_eigenvalue(sp, dg, BoundaryVariant::SNP, 2, id, vac));
  for (auto& s : sol.solutions)
    cands.push_back(dressed_eigenvalue(sp, dg, BoundaryVariant::SNP, 2, id, s));
  auto rep = match_spectrum(lines, cands);
  for (auto& e : rep.entries) CHECK(e.line >= 0);

  // S_1 within the matched line contains 1/2 M^(0) - M^(1) = L - M^(1)
  auto carts = snp_cartan_generators(sp, cfg.sites());
  for (size_t c = 0; c < rep.entries.size(); ++c) {
    int m1 = cands[c].roots.total_roots();
    double expect = 2.0 - m1;  // L = 2
    auto& line = lines[rep.entries[c].line];
    // S_1 commutes with t; diagonalise it inside the line's eigenspace
    const long dim = cfg.chain_dim();
    Mat basis(dim, line.members.size());
    for (size_t k = 0; k < line.members.size(); ++k) basis.col(k) = eigs[line.members[k]].vector;
    Eigen::HouseholderQR<Mat> qr(basis);
    Mat qthin = qr.householderQ() * Mat::Identity(dim, static_cast<long>(line.members.size()));
    Mat restricted = qthin.adjoint() * carts[0] * qthin;
    Eigen::ComplexEigenSolver<Mat> es(restricted);
    bool found = false;
    for (int k = 0; k < es.eigenvalues().size(); ++k)
      if (std::abs(es.eigenvalues()(k) - expect) < 1e-7) found = true;
    CHECK(found);
  }
}
