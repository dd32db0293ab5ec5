#include "reflectchain/boundary.hpp"

#include <algorithm>
#include <cmath>

namespace reflectchain {

std::string to_string(BoundaryVariant v) { return v == BoundaryVariant::SP ? "SP" : "SNP"; }
std::string to_string(BoundarySide s) { return s == BoundarySide::minus ? "minus" : "plus"; }

std::string to_string(ReflectionEq eq) {
  switch (eq) {
    case ReflectionEq::re: return "re";
    case ReflectionEq::re2: return "re2";
    case ReflectionEq::re3: return "re3";
    case ReflectionEq::re4: return "re4";
    case ReflectionEq::re_plus: return "re_plus";
    case ReflectionEq::re_plus_SNP_ss: return "re_plus_SNP_ss";
    case ReflectionEq::re_plus_SNP_bb: return "re_plus_SNP_bb";
    case ReflectionEq::re_plus_SNP_sb: return "re_plus_SNP_sb";
  }
  return "?";
}

KMatrix make_K_identity(const GradedSpace& sp, BoundaryVariant variant, BoundarySide side) {
  KMatrix k;
  k.spec.variant = variant;
  k.spec.side = side;
  k.spec.xi_infinite = true;
  if (variant == BoundaryVariant::SNP) k.spec.snp_matrix = Mat::Identity(sp.dim, sp.dim);
  k.poly = MatrixPoly::constant(Mat::Identity(sp.dim, sp.dim));
  return k;
}

namespace {

void validate_conjugator(const GradedSpace& sp, const Mat& u) {
  if (u.rows() != sp.dim || u.cols() != sp.dim)
    throw std::invalid_argument("conjugator dimension mismatch");
  for (int i = 0; i < sp.dim; ++i)
    for (int j = 0; j < sp.dim; ++j)
      if (sp.parity[i] != sp.parity[j] && std::abs(u(i, j)) > 0.0)
        throw std::invalid_argument("conjugator must preserve the grading");
  Eigen::FullPivLU<Mat> lu(u);
  if (!lu.isInvertible()) throw std::invalid_argument("conjugator must be invertible");
}

}  // namespace

KMatrix make_K_SP(const GradedSpace& sp, cplx xi, const std::vector<int>& signature,
                  const std::optional<Mat>& U) {
  if (static_cast<int>(signature.size()) != sp.dim)
    throw std::invalid_argument("signature length must match the space dimension");
  for (int s : signature)
    if (s != 1 && s != -1) throw std::invalid_argument("signature entries must be +1 or -1");
  Mat e = Mat::Zero(sp.dim, sp.dim);
  for (int i = 0; i < sp.dim; ++i) e(i, i) = signature[i];
  if (U) {
    validate_conjugator(sp, *U);
    e = (*U) * e * U->inverse();
  }
  KMatrix k;
  k.spec.variant = BoundaryVariant::SP;
  k.spec.side = BoundarySide::minus;
  k.spec.xi = xi;
  k.spec.signature = signature;
  k.spec.conjugator_U = U;
  k.poly = MatrixPoly({I * xi * Mat::Identity(sp.dim, sp.dim), e}, sp.dim);
  return k;
}

KMatrix make_K_SP_nilpotent(const GradedSpace& sp, cplx xi, const Mat& sigma) {
  if (sigma.rows() != sp.dim || sigma.cols() != sp.dim)
    throw std::invalid_argument("sigma dimension mismatch");
  if ((sigma * sigma).norm() > 1e-12 * std::max(1.0, sigma.norm() * sigma.norm()))
    throw std::invalid_argument("sigma must square to zero");
  for (int i = 0; i < sp.dim; ++i)
    for (int j = 0; j < sp.dim; ++j)
      if (sp.parity[i] != sp.parity[j] && std::abs(sigma(i, j)) > 0.0)
        throw std::invalid_argument("sigma must preserve the grading (bosonic solution)");
  KMatrix k;
  k.spec.variant = BoundaryVariant::SP;
  k.spec.side = BoundarySide::minus;
  k.spec.xi = xi;
  k.spec.nilpotent_sigma = sigma;
  k.poly = MatrixPoly({I * xi * Mat::Identity(sp.dim, sp.dim), sigma}, sp.dim);
  return k;
}

KMatrix make_K_SP_dual(const KMatrix& K, const GradedSpace& sp) {
  if (K.spec.variant != BoundaryVariant::SP || K.spec.side != BoundarySide::minus)
    throw std::invalid_argument("make_K_SP_dual expects an SP minus-side matrix");
  KMatrix out;
  out.spec = K.spec;
  out.spec.side = BoundarySide::plus;
  auto t = [&](const Mat& m) { return super_transpose(m, sp, TransposeKind::t); };
  out.poly = K.poly.map(t).crossed_arg(cplx(0.0, sp.rho));
  return out;
}

namespace {

// Split a classified SP K into (xi, E) with K = i xi Id + lambda E.
std::pair<cplx, Mat> split_sp(const KMatrix& K, const GradedSpace& sp) {
  Mat a = K.poly.c[0];
  Mat e = K.poly.degree() >= 1 ? K.poly.c[1] : Mat(Mat::Zero(sp.dim, sp.dim));
  cplx ixi = a(0, 0);
  if ((a - ixi * Mat::Identity(sp.dim, sp.dim)).norm() > 1e-10 * std::max(1.0, a.norm()))
    throw std::invalid_argument("K is not in the classified form i xi Id + lambda E");
  return {ixi / I, e};
}

}  // namespace

KMatrix make_K_pair_SP(const KMatrix& K, const GradedSpace& sp) {
  if (K.spec.variant != BoundaryVariant::SP)
    throw std::invalid_argument("make_K_pair_SP expects an SP matrix");
  if (K.spec.xi_infinite) return make_K_identity(sp, BoundaryVariant::SP);
  auto [xi, e] = split_sp(K, sp);
  Mat ebar = super_transpose(e, sp, TransposeKind::t);
  // Pinned by the compatibility equation itself: Q E_2 Q = Str(E) Q.
  cplx xibar = 0.5 * supertrace(e, sp) - xi;
  KMatrix out;
  out.spec = K.spec;
  out.spec.xi = xibar;
  out.poly = MatrixPoly({I * xibar * Mat::Identity(sp.dim, sp.dim), ebar}, sp.dim);
  return out;
}

KMatrix make_K_SNP(const GradedSpace& sp, const Mat& ktilde, double tol) {
  if (ktilde.rows() != sp.dim || ktilde.cols() != sp.dim)
    throw std::invalid_argument("SNP matrix dimension mismatch");
  Mat kt = super_transpose(ktilde, sp, TransposeKind::t);
  double scale = std::max(1.0, ktilde.norm());
  int eps = 0;
  if ((kt - ktilde).norm() < tol * scale) eps = 1;
  else if ((kt + ktilde).norm() < tol * scale) eps = -1;
  else throw std::invalid_argument("SNP matrix must satisfy K^t = +/- K");
  Eigen::FullPivLU<Mat> lu(ktilde);
  if (!lu.isInvertible()) throw std::invalid_argument("SNP matrix must be invertible");
  KMatrix k;
  k.spec.variant = BoundaryVariant::SNP;
  k.spec.side = BoundarySide::minus;
  k.spec.snp_matrix = ktilde;
  k.spec.snp_epsilon = eps;
  k.poly = MatrixPoly::constant(ktilde);
  return k;
}

KMatrix make_K_pair_SNP(const KMatrix& K, const GradedSpace& sp) {
  if (K.spec.variant != BoundaryVariant::SNP)
    throw std::invalid_argument("make_K_pair_SNP expects an SNP matrix");
  Mat inv = K.poly.c[0].inverse();
  cplx det = inv.determinant();
  cplx scale = std::pow(det, -1.0 / sp.dim);
  Mat partner = scale * inv;
  KMatrix out;
  out.spec = K.spec;
  out.spec.snp_matrix = partner;
  out.poly = MatrixPoly::constant(partner);
  return out;
}

namespace {

struct ReSide {
  // One sampled side of a reflection equation:
  // X1(arg1) Ka X2(arg2) Kb  with X in {R, Rbar}, positions per equation.
  Mat value;
};

Mat embed_a(const Mat& k, const GradedSpace& sp) { return kron(k, Mat::Identity(sp.dim, sp.dim)); }
Mat embed_b(const Mat& k, const GradedSpace& sp) { return kron(Mat::Identity(sp.dim, sp.dim), k); }

}  // namespace

CheckRecord check_reflection(const ScatteringPair& pair, const KMatrix& Ka,
                             const KMatrix& Kb, ReflectionEq eq, int samples,
                             Rng rng, double tol) {
  const GradedSpace& sp = pair.space;
  const Mat P = pair.P;
  auto R = [&](cplx x) { return pair.R.eval(x); };
  auto Rb = [&](cplx x) { return pair.Rbar.eval(x); };
  auto R21 = [&](cplx x) { return Mat(P * pair.R.eval(x) * P); };
  auto Rb21 = [&](cplx x) { return Mat(P * pair.Rbar.eval(x) * P); };
  auto tK = [&](const KMatrix& k, cplx x) {
    return super_transpose(k.eval(x), sp, TransposeKind::t);
  };
  const cplx tworho(0.0, 2.0 * sp.rho);

  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    cplx la = rng.sample_lambda();
    cplx lb = rng.sample_lambda();
    Mat ka, kb, lhs, rhs;
    switch (eq) {
      case ReflectionEq::re:
        ka = embed_a(Ka.eval(la), sp);
        kb = embed_b(Kb.eval(lb), sp);
        lhs = R(la - lb) * ka * R21(la + lb) * kb;
        rhs = kb * R(la + lb) * ka * R21(la - lb);
        break;
      case ReflectionEq::re3:
        ka = embed_a(Ka.eval(la), sp);
        kb = embed_b(Kb.eval(lb), sp);
        lhs = Rb(la - lb) * ka * Rb21(la + lb) * kb;
        rhs = kb * Rb(la + lb) * ka * Rb21(la - lb);
        break;
      case ReflectionEq::re2:
        ka = embed_a(Ka.eval(la), sp);
        kb = embed_b(Kb.eval(lb), sp);
        lhs = R(la - lb) * ka * Rb21(la + lb) * kb;
        rhs = kb * Rb(la + lb) * ka * R21(la - lb);
        break;
      case ReflectionEq::re4:
        ka = embed_a(Ka.eval(la), sp);
        kb = embed_b(Kb.eval(lb), sp);
        lhs = Rb(la - lb) * ka * R21(la + lb) * kb;
        rhs = kb * R(la + lb) * ka * Rb21(la - lb);
        break;
      case ReflectionEq::re_plus:
        ka = embed_a(tK(Ka, la), sp);
        kb = embed_b(tK(Kb, lb), sp);
        lhs = R(-la + lb) * ka * R21(-la - lb - tworho) * kb;
        rhs = kb * R(-la - lb - tworho) * ka * R21(-la + lb);
        break;
      case ReflectionEq::re_plus_SNP_ss:
      case ReflectionEq::re_plus_SNP_bb:
        ka = embed_a(tK(Ka, la), sp);
        kb = embed_b(tK(Kb, lb), sp);
        lhs = R(-la + lb) * ka * Rb21(-la - lb - tworho) * kb;
        rhs = kb * Rb(-la - lb - tworho) * ka * R21(-la + lb);
        break;
      case ReflectionEq::re_plus_SNP_sb:
        ka = embed_a(tK(Ka, la), sp);
        kb = embed_b(tK(Kb, lb), sp);
        lhs = Rb(-la + lb) * ka * R21(-la - lb - tworho) * kb;
        rhs = kb * R(-la - lb - tworho) * ka * Rb21(-la + lb);
        break;
    }
    worst = std::max(worst, rel_residual(lhs, rhs));
  }
  return CheckRecord::make("reflection." + to_string(eq), worst, tol,
                           {{"samples", std::to_string(samples)}});
}

std::pair<Mat, KMatrix> diagonalize_K(const KMatrix& K, const GradedSpace& sp) {
  if (K.spec.nilpotent_sigma)
    throw std::invalid_argument(
        "non-diagonalisable K (nilpotent family, case (ii)); no constant diagonaliser exists");
  if (K.constant()) {
    KMatrix d = K;
    return {Mat::Identity(sp.dim, sp.dim), d};
  }
  Mat e = K.poly.c[1];
  bool already_diagonal = true;
  for (int i = 0; i < sp.dim && already_diagonal; ++i)
    for (int j = 0; j < sp.dim; ++j)
      if (i != j && std::abs(e(i, j)) > 1e-14) {
        already_diagonal = false;
        break;
      }
  if (already_diagonal) return {Mat::Identity(sp.dim, sp.dim), K};
  Eigen::ComplexEigenSolver<Mat> es(e);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition of the constant part failed");
  Mat u = es.eigenvectors();
  Vec ev = es.eigenvalues();
  // Canonical order: descending real part, then imaginary part.
  std::vector<int> idx(sp.dim);
  for (int i = 0; i < sp.dim; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (ev(a).real() != ev(b).real()) return ev(a).real() > ev(b).real();
    return ev(a).imag() > ev(b).imag();
  });
  Mat us(sp.dim, sp.dim);
  Mat d = Mat::Zero(sp.dim, sp.dim);
  for (int i = 0; i < sp.dim; ++i) {
    us.col(i) = u.col(idx[i]);
    d(i, i) = ev(idx[i]);
  }
  Eigen::FullPivLU<Mat> lu(us);
  if (!lu.isInvertible())
    throw std::invalid_argument("K constant part is not diagonalisable");
  Mat us_inv = us.inverse();
  KMatrix dk;
  dk.spec = K.spec;
  dk.spec.conjugator_U = std::nullopt;
  dk.poly = MatrixPoly({us_inv * K.poly.c[0] * us, d}, sp.dim);
  // U must be lambda-independent: verify at a few sample points.
  for (cplx x : {cplx(0.37, 0.11), cplx(-0.83, 0.41), cplx(1.21, -0.57)}) {
    Mat lhs = K.eval(x);
    Mat rhs = us * dk.eval(x) * us_inv;
    if (rel_residual(lhs, rhs) > 1e-9)
      throw std::runtime_error("diagonalize_K: constant conjugation check failed");
  }
  return {us, dk};
}

KMatrix make_K_corner_example(const GradedSpace& sp, double k, cplx xi) {
  const int d = sp.dim;
  if (d < 2) throw std::invalid_argument("corner example needs dimension >= 2");
  double c = std::sqrt(4.0 * k * k + 1.0);
  Mat e = Mat::Zero(d, d);
  e(0, 0) = -1.0;
  e(d - 1, d - 1) = 1.0;
  for (int i = 1; i < d - 1; ++i) e(i, i) = c;
  e(0, d - 1) = 2.0 * k;
  e(d - 1, 0) = 2.0 * k;
  KMatrix km;
  km.spec.variant = BoundaryVariant::SP;
  km.spec.side = BoundarySide::minus;
  km.spec.xi = xi;
  km.poly = MatrixPoly({I * xi * Mat::Identity(d, d), e}, d);
  return km;
}

}  // namespace reflectchain
