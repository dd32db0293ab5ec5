#include <doctest.h>

#include "reflectchain/fusion.hpp"

using namespace reflectchain;

TEST_CASE("star dispatch") {
  auto sp = make_graded_space(3, 0, BasisKind::plain, +1);
  auto pair = build_scattering(sp);
  auto sp_table = star_dispatch(pair, BoundaryVariant::SP, 2);
  CHECK(!sp_table.swapped);
  CHECK(sp_table.Lstar == 2);
  CHECK((sp_table.zeta_star - pair.zeta).norm() == doctest::Approx(0.0));
  CHECK(std::abs(sp_table.q_star(cplx(0.4, 0.1)) - (cplx(0.4, 0.1) - I * sp.rho)) < 1e-14);

  auto snp_table = star_dispatch(pair, BoundaryVariant::SNP, 2);
  CHECK(snp_table.swapped);
  CHECK(snp_table.Lstar == 4);
  CHECK((snp_table.zeta_star - pair.zetabar).norm() == doctest::Approx(0.0));
  CHECK(std::abs(snp_table.q_star(cplx(0.4, 0.1)) - (cplx(0.4, 0.1) + I)) < 1e-14);
}

TEST_CASE("fusion projectors") {
  for (auto& sp : {make_graded_space(2, 0, BasisKind::plain, +1),
                   make_graded_space(3, 0, BasisKind::plain, +1),
                   make_graded_space(2, 1, BasisKind::distinguished, +1)}) {
    auto pair = build_scattering(sp);
    auto fp = build_fusion_projectors(pair);
    CHECK((fp.Pminus * fp.Pminus - fp.Pminus).norm() < 1e-12);
    CHECK((fp.Pplus + fp.Pminus - identity_on(sp, 2)).norm() < 1e-13);
    Eigen::JacobiSVD<Mat> svd(fp.Pminus);
    int rank = 0;
    for (int k = 0; k < svd.singularValues().size(); ++k)
      if (svd.singularValues()(k) > 1e-10) ++rank;
    CHECK(rank == 1);
    // P Pminus = Pminus P = cp_sign Pminus
    CHECK((pair.P * fp.Pminus - static_cast<double>(sp.cp_sign) * fp.Pminus).norm() < 1e-12);
    CHECK(check_projector_identities(pair, 4, Rng::seeded(3)).pass);
  }
  // sl(2|1): 2 rho = 1, Pminus = Q
  auto sp = make_graded_space(2, 1, BasisKind::distinguished, +1);
  auto pair = build_scattering(sp);
  auto fp = build_fusion_projectors(pair);
  CHECK((fp.Pminus - pair.Q).norm() < 1e-13);
}

TEST_CASE("quantum determinants match their closed forms for identity boundaries") {
  Rng rng = Rng::seeded(7);
  for (auto [M, t0, v] : std::vector<std::tuple<int, int, BoundaryVariant>>{
           {2, +1, BoundaryVariant::SP},
           {3, +1, BoundaryVariant::SP},
           {2, +1, BoundaryVariant::SNP},
           {2, -1, BoundaryVariant::SNP},
           {3, +1, BoundaryVariant::SNP}}) {
    auto sp = make_graded_space(M, 0, BasisKind::plain, t0);
    auto id = make_K_identity(sp, v);
    auto cfg = make_chain_config(sp, v, 1, id, id);
    auto rec = check_quantum_determinants(cfg, 4, rng.fork(M * 10 + t0 + (v == BoundaryVariant::SNP)));
    CHECK(rec.pass);
  }
  // sl(2) SP L=1: delta[T](x) = zeta(x + i)
  auto sp = make_graded_space(2, 0, BasisKind::plain, +1);
  auto id = make_K_identity(sp, BoundaryVariant::SP);
  auto qd = quantum_determinants(make_chain_config(sp, BoundaryVariant::SP, 1, id, id));
  auto pair = build_scattering(sp);
  cplx x(0.71, 0.23);
  CHECK(std::abs(qd.deltaT(x) - pair.zeta.eval(x + I)) < 1e-12);
  CHECK(std::abs(qd.DeltaKminus(x) + (2.0 * x)) < 1e-12);  // -q(2x + i rho) = -2x
}

TEST_CASE("fusion identity on SP and SNP chains") {
  Rng rng = Rng::seeded(11);
  for (auto [M, t0, v] : std::vector<std::tuple<int, int, BoundaryVariant>>{
           {2, +1, BoundaryVariant::SP},
           {3, +1, BoundaryVariant::SP},
           {2, +1, BoundaryVariant::SNP},
           {2, -1, BoundaryVariant::SNP},
           {3, +1, BoundaryVariant::SNP}}) {
    auto sp = make_graded_space(M, 0, BasisKind::plain, t0);
    auto id = make_K_identity(sp, v);
    auto cfg = make_chain_config(sp, v, 1, id, id);
    CHECK(check_fusion_identity(cfg, 3, rng.fork(M * 10 + t0 + 5 * (v == BoundaryVariant::SNP)))
              .pass);
    CHECK(check_fused_commutation(cfg, 2, rng.fork(M * 100 + t0)).pass);
  }
}

TEST_CASE("fault-injected quantum determinant breaks the identity") {
  auto sp = make_graded_space(2, 0, BasisKind::plain, +1);
  auto id = make_K_identity(sp, BoundaryVariant::SP);
  auto cfg = make_chain_config(sp, BoundaryVariant::SP, 1, id, id);
  auto tf = build_transfer(cfg);
  auto fo = build_fused_operators(cfg);
  auto qd = quantum_determinants(cfg);
  auto pair = build_scattering(sp);
  cplx x(0.52, 0.31);
  Mat lhs = fo.t_fused(x);
  cplx dets = qd.DeltaKplus(x) * (1.3 * qd.deltaT(x)) * qd.DeltaKminus(x) * qd.deltaThat(x);
  Mat rhs = pair.zeta.eval(2.0 * x + 2.0 * I) * (tf.tbar.eval(x) * tf.t.eval(x + I));
  rhs -= dets * Mat::Identity(rhs.rows(), rhs.cols());
  CHECK(rel_residual(lhs, rhs) > 1e-3);
}

TEST_CASE("generalised fusion with the antisymmetriser, sl(2) and sl(3)") {
  for (int N : {2, 3}) {
    auto sp = make_graded_space(N, 0, BasisKind::plain, +1);
    auto id = make_K_identity(sp, BoundaryVariant::SP);
    auto cfg = make_chain_config(sp, BoundaryVariant::SP, 1, id, id);
    auto rec = check_generalized_fusion(cfg, 2, Rng::seeded(13 + N));
    CHECK(rec.pass);
  }
  // SNP or graded configurations are rejected
  auto sp = make_graded_space(2, 1, BasisKind::distinguished, +1);
  auto id = make_K_identity(sp, BoundaryVariant::SP);
  auto cfg = make_chain_config(sp, BoundaryVariant::SP, 1, id, id);
  CHECK_THROWS_AS(check_generalized_fusion(cfg, 1, Rng::seeded(1)), std::invalid_argument);
}

TEST_CASE("fused eigenvalues reproduce the dressing pair constraint") {
  // On the common eigenbasis the fusion identity links Lambda_F with
  // Lambdabar(x) Lambda(x + i rho); feeding a Bethe line through it is the
  // functional origin of A_0(x + i rho) A_{N-1}(x) = 1.
  auto sp = make_graded_space(2, 0, BasisKind::plain, -1);
  auto dg = diagram_for_space(sp);
  auto id = make_K_identity(sp, BoundaryVariant::SNP);
  auto cfg = make_chain_config(sp, BoundaryVariant::SNP, 1, id, id);
  auto tf = build_transfer(cfg);
  auto fo = build_fused_operators(cfg);
  auto qd = quantum_determinants(cfg);
  auto pair = build_scattering(sp);
  Rng rng = Rng::seeded(17);
  auto eigs = diagonalize_transfer(tf, rng.fork(1));
  cplx x = rng.sample_lambda();
  Mat tF = fo.t_fused(x);
  Mat tb = tf.tbar.eval(x);
  Mat tsh = tf.t.eval(x + I * sp.rho);
  cplx dets = qd.DeltaKplus(x) * qd.deltaT(x) * qd.DeltaKminus(x) * qd.deltaThat(x);
  cplx zs = pair.zeta.eval(2.0 * x + 2.0 * I * sp.rho);
  for (auto& line : eigs) {
    const Vec& v = line.vector;
    cplx nn = v.adjoint() * v;
    cplx lamF = cplx(v.adjoint() * tF * v) / nn;
    cplx lamb = cplx(v.adjoint() * tb * v) / nn;
    cplx lams = cplx(v.adjoint() * tsh * v) / nn;
    CHECK(std::abs(lamF - (zs * lamb * lams - dets)) < 1e-8 * std::max(1.0, std::abs(lamF)));
  }

  // and the dressing functions satisfy the same pair constraint directly
  BetheRootSet rs;
  rs.roots = {{cplx(0.83, 0.11)}};
  auto A = dressing(sp, dg, BoundaryVariant::SNP, rs);
  CHECK(std::abs(A[0].eval(x + I * sp.rho) * A[1].eval(x) - 1.0) < 1e-11);
}
