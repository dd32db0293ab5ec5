#include "reflectchain/scattering.hpp"

#include <cmath>

namespace reflectchain {

namespace {

ScalarPoly zeta_poly(double shift) {
  // (lambda + i s)(-lambda + i s) = -lambda^2 - s^2
  return ScalarPoly({cplx(-shift * shift, 0.0), 0.0, -1.0});
}

}  // namespace

ScatteringPair build_scattering(const GradedSpace& sp) {
  ScatteringPair out;
  out.space = sp;
  out.P = super_permutation(sp);
  out.Q = crossed_permutation(sp);
  const int d2 = sp.dim * sp.dim;
  Mat id = Mat::Identity(d2, d2);
  out.R = MatrixPoly({I * out.P, id}, d2);
  out.Rbar = MatrixPoly({cplx(0.0, -sp.rho) * id + I * out.Q, -id}, d2);
  out.zeta = zeta_poly(1.0);
  out.zetabar = zeta_poly(sp.rho);
  if (sp.kind == BasisKind::plain && sp.dim == 2 && sp.theta0 == -1)
    out.note = "sl(2) with theta0 = -1: Rbar is proportional to R, no genuine anti-soliton";
  return out;
}

namespace {

struct Triple {
  // Two-factor operator polys embedded on three factors.
  static Mat at(const MatrixPoly& op2, cplx x, int p, int q, const GradedSpace& sp) {
    return embed_pair(op2.eval(x), p, q, 3, sp);
  }
};

}  // namespace

CheckRecord check_YBE(const ScatteringPair& pair, YbeKind which, int samples,
                      Rng rng, double tol) {
  const GradedSpace& sp = pair.space;
  const MatrixPoly& R = pair.R;
  const MatrixPoly& A = (which == YbeKind::RRR) ? pair.R : pair.Rbar;
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    cplx l1 = rng.sample_lambda();
    cplx l2 = rng.sample_lambda();
    Mat a12 = Triple::at(A, l1 - l2, 0, 1, sp);
    Mat a13 = Triple::at(A, l1, 0, 2, sp);
    Mat r23 = Triple::at(R, l2, 1, 2, sp);
    Mat lhs = a12 * a13 * r23;
    Mat rhs = r23 * a13 * a12;
    worst = std::max(worst, rel_residual(lhs, rhs));
  }
  const char* name = which == YbeKind::RRR ? "ybe.RRR" : "ybe.RbarRbarR";
  return CheckRecord::make(name, worst, tol,
                           {{"samples", std::to_string(samples)},
                            {"dim", std::to_string(sp.dim)}});
}

CheckRecord check_unitarity(const ScatteringPair& pair, RKind which, double tol) {
  const MatrixPoly& A = (which == RKind::R) ? pair.R : pair.Rbar;
  const ScalarPoly& z = (which == RKind::R) ? pair.zeta : pair.zetabar;
  Mat P = pair.P;
  MatrixPoly a21 = A.conjugated(P, P).negate_arg();
  MatrixPoly lhs = A * a21;
  MatrixPoly rhs = MatrixPoly::from_scalar(z, lhs.dim);
  double res = max_coeff_distance(lhs, rhs) / std::max(1.0, lhs.norm());
  const char* name = which == RKind::R ? "unitarity.R" : "unitarity.Rbar";
  return CheckRecord::make(name, res, tol);
}

CheckRecord check_crossing_unitarity(const ScatteringPair& pair, RKind which,
                                     double tol) {
  const GradedSpace& sp = pair.space;
  if (sp.rho == 0.0) throw std::invalid_argument("crossing-unitarity requires rho != 0");
  const MatrixPoly& A = (which == RKind::R) ? pair.R : pair.Rbar;
  const ScalarPoly& z = (which == RKind::R) ? pair.zetabar : pair.zeta;
  auto t1 = [&](const Mat& m) { return super_transpose_factor(m, 0, 2, sp, TransposeKind::t); };
  auto t2 = [&](const Mat& m) { return super_transpose_factor(m, 1, 2, sp, TransposeKind::t); };
  MatrixPoly at1 = A.map(t1);
  MatrixPoly at2 = A.map(t2).crossed_arg(cplx(0.0, 2.0 * sp.rho));
  MatrixPoly lhs = at1 * at2;
  MatrixPoly rhs = MatrixPoly::from_scalar(z.shift(cplx(0.0, sp.rho)), lhs.dim);
  double res = max_coeff_distance(lhs, rhs) / std::max(1.0, lhs.norm());
  const char* name = which == RKind::R ? "crossing_unitarity.R" : "crossing_unitarity.Rbar";
  return CheckRecord::make(name, res, tol);
}

CheckRecord check_AA_commutation(const ScatteringPair& pair, int trials, Rng rng,
                                 double tol) {
  const GradedSpace& sp = pair.space;
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    Mat a = random_even_matrix(sp, rng);
    Mat aa = graded_kron(a, a, sp.parity, sp.parity);
    double scale = std::max(1.0, aa.norm());
    for (size_t k = 0; k < pair.R.c.size(); ++k) {
      Mat comm = aa * pair.R.c[k] - pair.R.c[k] * aa;
      worst = std::max(worst, comm.norm() / scale);
    }
  }
  return CheckRecord::make("commutation.AA_R", worst, tol,
                           {{"trials", std::to_string(trials)}});
}

CheckRecord check_cp_symmetry(const ScatteringPair& pair, double tol) {
  const GradedSpace& sp = pair.space;
  Mat P = pair.P;
  // R21 = R12 as exact coefficients.
  MatrixPoly r21 = pair.R.conjugated(P, P);
  double res = max_coeff_distance(r21, pair.R) / std::max(1.0, pair.R.norm());
  // Crossing through either factor produces the same Rbar.
  auto t2 = [&](const Mat& m) { return super_transpose_factor(m, 1, 2, sp, TransposeKind::t); };
  MatrixPoly rbar_via_t2 = pair.R.map(t2).crossed_arg(cplx(0.0, sp.rho));
  res = std::max(res, max_coeff_distance(rbar_via_t2, pair.Rbar) / std::max(1.0, pair.Rbar.norm()));
  // Rbar21 = Rbar12.
  MatrixPoly rb21 = pair.Rbar.conjugated(P, P);
  res = std::max(res, max_coeff_distance(rb21, pair.Rbar) / std::max(1.0, pair.Rbar.norm()));
  return CheckRecord::make("cp.R_symmetry", res, tol);
}

}  // namespace reflectchain
