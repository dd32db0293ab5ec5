#include <doctest.h>

#include "reflectchain/graded.hpp"

using namespace reflectchain;

namespace {

std::vector<GradedSpace> configured_spaces() {
  return {
      make_graded_space(2, 0, BasisKind::plain, +1),
      make_graded_space(2, 0, BasisKind::plain, -1),
      make_graded_space(3, 0, BasisKind::plain, +1),
      make_graded_space(4, 0, BasisKind::plain, -1),
      make_graded_space(2, 1, BasisKind::distinguished, +1),
      make_graded_space(1, 2, BasisKind::symmetric, -1),
      make_graded_space(3, 2, BasisKind::distinguished, +1),
      make_graded_space(3, 2, BasisKind::symmetric, -1),
  };
}

}  // namespace

TEST_CASE("factory fixes grading, V and rho per basis") {
  auto sl2 = make_graded_space(2, 0, BasisKind::plain, +1);
  CHECK(sl2.parity == std::vector<int>{0, 0});
  CHECK(sl2.rho == doctest::Approx(1.0));
  Mat v2(2, 2);
  v2 << 0, 1, 1, 0;
  CHECK((sl2.V - v2).norm() == doctest::Approx(0.0));

  auto sl21 = make_graded_space(2, 1, BasisKind::distinguished, +1);
  CHECK(sl21.parity == std::vector<int>{0, 0, 1});
  CHECK(sl21.rho == doctest::Approx(0.5));

  auto sl12 = make_graded_space(1, 2, BasisKind::symmetric, -1);
  CHECK(sl12.parity == std::vector<int>{0, 1, 0});
  CHECK(sl12.rho == doctest::Approx(0.5));
}

TEST_CASE("factory rejects inconsistent configurations") {
  CHECK_THROWS_AS(make_graded_space(2, 2, BasisKind::distinguished, +1), std::invalid_argument);
  CHECK_THROWS_AS(make_graded_space(3, 0, BasisKind::plain, -1), std::invalid_argument);
  CHECK_THROWS_AS(make_graded_space(2, 1, BasisKind::symmetric, -1), std::invalid_argument);
  CHECK_THROWS_AS(make_graded_space(1, 0, BasisKind::plain, +1), std::invalid_argument);
  CHECK_THROWS_AS(make_graded_space(2, 1, BasisKind::distinguished, -1), std::invalid_argument);
  // M, N both odd: no invertible crossing matrix exists.
  CHECK_THROWS_AS(make_graded_space(3, 1, BasisKind::distinguished, +1), std::invalid_argument);
}

TEST_CASE("graded_kron reduces to the plain Kronecker product when ungraded") {
  auto sp = make_graded_space(3, 0, BasisKind::plain, +1);
  Rng rng = Rng::seeded(5);
  Mat a = rng.random_matrix(3), b = rng.random_matrix(3);
  CHECK((graded_kron(a, b, sp.parity, sp.parity) - kron(a, b)).norm() == doctest::Approx(0.0));
  Mat id = Mat::Identity(3, 3);
  CHECK((graded_kron(id, id, sp.parity, sp.parity) - Mat::Identity(9, 9)).norm() ==
        doctest::Approx(0.0));
}

TEST_CASE("P squares to the identity, including sl(1|1)") {
  for (auto& sp : configured_spaces()) {
    Mat p = super_permutation(sp);
    CHECK((p * p - identity_on(sp, 2)).norm() < 1e-14);
  }
  auto sl11 = make_graded_space_unchecked(1, 1, BasisKind::distinguished, +1);
  Mat p = super_permutation(sl11);
  CHECK((p * p - Mat::Identity(4, 4)).norm() < 1e-14);
}

TEST_CASE("graded_kron multiplicativity and associativity on homogeneous matrices") {
  for (auto& sp : {make_graded_space_unchecked(1, 1, BasisKind::distinguished, +1),
                   make_graded_space(2, 1, BasisKind::distinguished, +1)}) {
    Rng rng = Rng::seeded(17);
    for (int trial = 0; trial < 8; ++trial) {
      bool pb = rng.next_u64() % 2, pc = rng.next_u64() % 2;
      Mat a = random_even_matrix(sp, rng);
      Mat b = pb ? random_odd_matrix(sp, rng) : random_even_matrix(sp, rng);
      Mat c = pc ? random_odd_matrix(sp, rng) : random_even_matrix(sp, rng);
      Mat d = random_even_matrix(sp, rng);
      double sign = (pb && pc) ? -1.0 : 1.0;
      Mat lhs = graded_kron(a, b, sp.parity, sp.parity) * graded_kron(c, d, sp.parity, sp.parity);
      Mat rhs = sign * graded_kron(Mat(a * c), Mat(b * d), sp.parity, sp.parity);
      CHECK((lhs - rhs).norm() < 1e-12 * std::max(1.0, rhs.norm()));

      auto p2 = product_parities(sp.parity, sp.parity);
      Mat assoc1 = graded_kron(graded_kron(a, b, sp.parity, sp.parity), c, p2, sp.parity);
      Mat assoc2 = graded_kron(a, graded_kron(b, c, sp.parity, sp.parity), sp.parity, p2);
      CHECK((assoc1 - assoc2).norm() < 1e-12 * std::max(1.0, assoc1.norm()));
    }
  }
}

TEST_CASE("super transposition: hand case, involution and graded antihomomorphism") {
  auto sp = make_graded_space(2, 0, BasisKind::plain, +1);
  Mat e12 = Mat::Zero(2, 2);
  e12(0, 1) = 1.0;
  Mat t = super_transpose(e12, sp, TransposeKind::t);
  Mat expect = sp.V.inverse() * e12.transpose() * sp.V;
  CHECK((t - expect).norm() == doctest::Approx(0.0));

  for (auto& g : configured_spaces()) {
    Rng rng = Rng::seeded(23);
    Mat a = random_even_matrix(g, rng);
    Mat tt = super_transpose(super_transpose(a, g, TransposeKind::T), g, TransposeKind::T);
    CHECK((tt - a).norm() < 1e-13);
    for (int pa = 0; pa <= 1; ++pa)
      for (int pb = 0; pb <= 1; ++pb) {
        if (!g.is_graded() && (pa || pb)) continue;
        Mat x = pa ? random_odd_matrix(g, rng) : random_even_matrix(g, rng);
        Mat y = pb ? random_odd_matrix(g, rng) : random_even_matrix(g, rng);
        double sign = (pa && pb) ? -1.0 : 1.0;
        Mat lhs = super_transpose(Mat(x * y), g, TransposeKind::T);
        Mat rhs = sign * super_transpose(y, g, TransposeKind::T) *
                  super_transpose(x, g, TransposeKind::T);
        CHECK((lhs - rhs).norm() < 1e-12 * std::max(1.0, rhs.norm()));
      }
  }
}

TEST_CASE("crossing matrix: V^T V = Id; Q projector relations") {
  for (auto& sp : configured_spaces()) {
    Mat vt = super_transpose(sp.V, sp, TransposeKind::T);
    CHECK((vt * sp.V - Mat::Identity(sp.dim, sp.dim)).norm() < 1e-13);
    Mat p = super_permutation(sp);
    Mat q = crossed_permutation(sp);
    CHECK((q * q - 2.0 * sp.rho * q).norm() < 1e-12);
    CHECK((p * q - static_cast<double>(sp.cp_sign) * q).norm() < 1e-12);
    CHECK((q * p - static_cast<double>(sp.cp_sign) * q).norm() < 1e-12);
  }
}

TEST_CASE("super partial trace") {
  for (auto& sp : configured_spaces()) {
    Mat p = super_permutation(sp);
    Mat id1 = Mat::Identity(sp.dim, sp.dim);
    CHECK((super_partial_trace(p, 0, 2, sp) - id1).norm() < 1e-13);
    CHECK((super_partial_trace(identity_on(sp, 2), 0, 2, sp) - 2.0 * sp.rho * id1).norm() <
          1e-13);
    Rng rng = Rng::seeded(31);
    Mat x = random_even_matrix(sp, rng);
    Mat emb = graded_kron(x, id1, sp.parity, sp.parity);
    CHECK((super_partial_trace(emb, 1, 2, sp) - 2.0 * sp.rho * x).norm() <
          1e-12 * std::max(1.0, x.norm()));
  }
  auto sp = make_graded_space(2, 0, BasisKind::plain, +1);
  Rng rng = Rng::seeded(37);
  Mat o = rng.random_matrix(4);
  Mat pt = super_partial_trace(o, 0, 2, sp);
  Mat expect = o.block(0, 0, 2, 2) + o.block(2, 2, 2, 2);
  CHECK((pt - expect).norm() < 1e-13);
}

TEST_CASE("pair embedding routes non-adjacent factors through super swaps") {
  auto sp = make_graded_space(2, 1, BasisKind::distinguished, +1);
  Mat p = super_permutation(sp);
  Mat p02 = embed_pair(p, 0, 2, 3, sp);
  CHECK((p02 * p02 - identity_on(sp, 3)).norm() < 1e-13);
  Rng rng = Rng::seeded(41);
  Mat x = random_even_matrix(sp, rng);
  Mat x0 = embed_site(x, 0, 3, sp);
  Mat x2 = embed_site(x, 2, 3, sp);
  CHECK((p02 * x0 * p02 - x2).norm() < 1e-12);
}
