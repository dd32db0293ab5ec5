#include "reflectchain/graded.hpp"

#include <algorithm>

namespace reflectchain {

std::string to_string(BasisKind k) {
  switch (k) {
    case BasisKind::plain: return "plain";
    case BasisKind::distinguished: return "distinguished";
    case BasisKind::symmetric: return "symmetric";
  }
  return "?";
}

BasisKind basis_kind_from_string(const std::string& s) {
  if (s == "plain") return BasisKind::plain;
  if (s == "distinguished") return BasisKind::distinguished;
  if (s == "symmetric") return BasisKind::symmetric;
  throw std::invalid_argument("unknown basis kind: " + s);
}

namespace {

Mat antidiag_signs(const std::vector<double>& v) {
  const int d = static_cast<int>(v.size());
  Mat m = Mat::Zero(d, d);
  for (int i = 0; i < d; ++i) m(i, d - 1 - i) = v[i];
  return m;
}

GradedSpace build(int M, int N, BasisKind kind, int theta0) {
  GradedSpace sp;
  sp.M = M;
  sp.N = N;
  sp.dim = M + N;
  sp.kind = kind;
  sp.theta0 = theta0;
  const int d = sp.dim;
  sp.parity.assign(d, 0);

  switch (kind) {
    case BasisKind::plain: {
      // All indices bosonic; V per the chosen theta0; rho = dim/2.
      std::vector<double> v(d, 1.0);
      if (theta0 == -1)
        for (int i = d / 2; i < d; ++i) v[i] = -1.0;
      sp.V = antidiag_signs(v);
      sp.rho = d / 2.0;
      sp.cp_sign = theta0;
      break;
    }
    case BasisKind::distinguished: {
      for (int i = M; i < d; ++i) sp.parity[i] = 1;
      // Block anti-diagonal. Crossing consistency requires one block
      // graded-symmetric and the other graded-antisymmetric; an invertible
      // antisymmetric block needs even size, which fixes where the signs go.
      sp.V = Mat::Zero(d, d);
      if (N % 2 == 0) {
        for (int i = 0; i < M; ++i) sp.V(i, M - 1 - i) = 1.0;
        for (int i = 0; i < N; ++i) sp.V(M + i, M + N - 1 - i) = (i < N / 2) ? 1.0 : -1.0;
        sp.cp_sign = 1;
      } else if (M % 2 == 0) {
        for (int i = 0; i < M; ++i) sp.V(i, M - 1 - i) = (i < M / 2) ? 1.0 : -1.0;
        for (int i = 0; i < N; ++i) sp.V(M + i, M + N - 1 - i) = 1.0;
        sp.cp_sign = -1;
      } else {
        // M, N both odd: no graded-(anti)symmetric invertible V exists. Leave
        // a plain block V behind for ungraded operations; the validated
        // factory rejects this configuration.
        for (int i = 0; i < M; ++i) sp.V(i, M - 1 - i) = 1.0;
        for (int i = 0; i < N; ++i) sp.V(M + i, M + N - 1 - i) = 1.0;
        sp.cp_sign = 0;
      }
      sp.rho = theta0 * (M - N) / 2.0;
      break;
    }
    case BasisKind::symmetric: {
      const int n = N / 2;
      for (int i = n; i < M + n; ++i) sp.parity[i] = 1;
      std::vector<double> v(d, 1.0);
      for (int i = n + M; i < d; ++i) v[i] = -1.0;
      sp.V = antidiag_signs(v);
      sp.rho = theta0 * (M - N) / 2.0;
      sp.cp_sign = theta0;
      break;
    }
  }
  return sp;
}

}  // namespace

GradedSpace make_graded_space_unchecked(int M, int N, BasisKind kind, int theta0) {
  return build(M, N, kind, theta0);
}

GradedSpace make_graded_space(int M, int N, BasisKind kind, int theta0) {
  if (M < 0 || N < 0) throw std::invalid_argument("M, N must be non-negative");
  if (M + N < 2) throw std::invalid_argument("total dimension must be at least 2");
  if (theta0 != 1 && theta0 != -1) throw std::invalid_argument("theta0 must be +1 or -1");
  switch (kind) {
    case BasisKind::plain:
      if (N != 0) throw std::invalid_argument("plain basis requires N = 0");
      if (theta0 == -1 && M % 2 != 0)
        throw std::invalid_argument("plain basis with theta0 = -1 requires even dimension");
      break;
    case BasisKind::distinguished:
      if (M < 1 || N < 1)
        throw std::invalid_argument("distinguished basis requires M >= 1 and N >= 1 (use plain for N = 0)");
      if (M == N) throw std::invalid_argument("rho must be nonzero: M = N superalgebras are excluded");
      if (theta0 != 1) throw std::invalid_argument("distinguished basis fixes theta0 = +1");
      if (M % 2 == 1 && N % 2 == 1)
        throw std::invalid_argument(
            "distinguished basis with M and N both odd admits no invertible crossing matrix");
      break;
    case BasisKind::symmetric:
      if (N < 2 || N % 2 != 0)
        throw std::invalid_argument("symmetric basis requires even N >= 2");
      if (M == N) throw std::invalid_argument("rho must be nonzero: M = N superalgebras are excluded");
      if (theta0 != -1) throw std::invalid_argument("symmetric basis fixes theta0 = -1");
      break;
  }
  return build(M, N, kind, theta0);
}

std::vector<int> product_parities(std::span<const int> pa, std::span<const int> pb) {
  std::vector<int> out;
  out.reserve(pa.size() * pb.size());
  for (int a : pa)
    for (int b : pb) out.push_back((a + b) & 1);
  return out;
}

Mat graded_kron(const Mat& a, const Mat& b, std::span<const int> pa,
                std::span<const int> pb) {
  const int da = static_cast<int>(a.rows()), db = static_cast<int>(b.rows());
  if (a.cols() != da || b.cols() != db) throw std::invalid_argument("graded_kron: square matrices required");
  if (static_cast<int>(pa.size()) != da || static_cast<int>(pb.size()) != db)
    throw std::invalid_argument("graded_kron: parity vector dimension mismatch");
  Mat out(da * db, da * db);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < db; ++j)
      for (int k = 0; k < da; ++k)
        for (int l = 0; l < db; ++l) {
          double s = (pb[j] & (pa[i] ^ pa[k])) ? -1.0 : 1.0;
          out(i * db + j, k * db + l) = s * a(i, k) * b(j, l);
        }
  return out;
}

Mat kron(const Mat& a, const Mat& b) {
  const int da = static_cast<int>(a.rows()), db = static_cast<int>(b.rows());
  Mat out(da * db, static_cast<int>(a.cols()) * static_cast<int>(b.cols()));
  for (int i = 0; i < da; ++i)
    for (int k = 0; k < a.cols(); ++k)
      out.block(i * db, k * static_cast<int>(b.cols()), db, b.cols()) = a(i, k) * b;
  return out;
}

Mat super_transpose(const Mat& a, const GradedSpace& sp, TransposeKind kind) {
  const int d = sp.dim;
  if (a.rows() != d || a.cols() != d) throw std::invalid_argument("super_transpose: dimension mismatch");
  Mat t(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double s = ((sp.parity[i] & sp.parity[j]) ^ sp.parity[j]) ? -1.0 : 1.0;
      t(i, j) = s * a(j, i);
    }
  if (kind == TransposeKind::T) return t;
  return sp.V.inverse() * t * sp.V;
}

Mat super_transpose_factor(const Mat& op, int factor, int nfactors,
                           const GradedSpace& sp, TransposeKind kind) {
  const int d = sp.dim;
  const int total = static_cast<int>(op.rows());
  const int right = [&] {
    int r = 1;
    for (int f = factor + 1; f < nfactors; ++f) r *= d;
    return r;
  }();
  const int left = total / (d * right);
  // Composite parity of the factors to the left of the transposed one; the
  // transposition carries a Koszul sign against that block.
  std::vector<int> lpar(left, 0);
  for (int a = 0; a < left; ++a) {
    int x = a, p = 0;
    for (int f = factor - 1; f >= 0; --f) {
      p ^= sp.parity[x % d];
      x /= d;
    }
    lpar[a] = p;
  }
  Mat out = Mat::Zero(total, total);
  for (int a = 0; a < left; ++a)
    for (int c = 0; c < left; ++c)
      for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) {
          int s = (sp.parity[i] & sp.parity[k]) ^ sp.parity[k];
          s ^= (sp.parity[i] ^ sp.parity[k]) & (lpar[a] ^ lpar[c]);
          double sgn = s ? -1.0 : 1.0;
          for (int b = 0; b < right; ++b)
            for (int e = 0; e < right; ++e) {
              int row = (a * d + i) * right + b;
              int col = (c * d + k) * right + e;
              int srow = (a * d + k) * right + b;
              int scol = (c * d + i) * right + e;
              out(row, col) += sgn * op(srow, scol);
            }
        }
  if (kind == TransposeKind::T) return out;
  Mat vf = embed_site(sp.V, factor, nfactors, sp);
  return vf.inverse() * out * vf;
}

cplx supertrace(const Mat& a, const GradedSpace& sp) {
  cplx s = 0.0;
  for (int i = 0; i < sp.dim; ++i) s += static_cast<double>(sp.sign_of(i)) * a(i, i);
  return s;
}

Mat super_partial_trace(const Mat& op, int factor, int nfactors,
                        const GradedSpace& sp) {
  const int d = sp.dim;
  const int total = static_cast<int>(op.rows());
  int right = 1;
  for (int f = factor + 1; f < nfactors; ++f) right *= d;
  const int left = total / (d * right);
  const int rest = left * right;
  Mat out = Mat::Zero(rest, rest);
  for (int a = 0; a < left; ++a)
    for (int c = 0; c < left; ++c)
      for (int b = 0; b < right; ++b)
        for (int e = 0; e < right; ++e) {
          cplx s = 0.0;
          for (int i = 0; i < d; ++i) {
            int row = (a * d + i) * right + b;
            int col = (c * d + i) * right + e;
            s += static_cast<double>(sp.sign_of(i)) * op(row, col);
          }
          out(a * right + b, c * right + e) = s;
        }
  return out;
}

Mat super_permutation(const GradedSpace& sp) {
  const int d = sp.dim;
  Mat p = Mat::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double s = (sp.parity[i] & sp.parity[j]) ? -1.0 : 1.0;
      p(i * d + j, j * d + i) = s;
    }
  return p;
}

Mat crossed_permutation(const GradedSpace& sp) {
  Mat p = super_permutation(sp);
  return super_transpose_factor(p, 0, 2, sp, TransposeKind::t);
}

Mat identity_on(const GradedSpace& sp, int nfactors) {
  int total = 1;
  for (int f = 0; f < nfactors; ++f) total *= sp.dim;
  return Mat::Identity(total, total);
}

Mat embed_site(const Mat& op, int pos, int nfactors, const GradedSpace& sp) {
  const int d = sp.dim;
  Mat out = Mat::Identity(1, 1);
  for (int f = 0; f < nfactors; ++f) {
    out = kron(out, f == pos ? op : Mat(Mat::Identity(d, d)));
  }
  return out;
}

Mat embed_pair(const Mat& op2, int p, int q, int nfactors, const GradedSpace& sp) {
  if (p >= q) throw std::invalid_argument("embed_pair: need p < q");
  const int d = sp.dim;
  Mat out = Mat::Identity(1, 1);
  for (int f = 0; f < nfactors; ++f) {
    if (f == p) {
      out = kron(out, op2);
      ++f;  // op2 consumed factors p, p+1
    } else {
      out = kron(out, Mat(Mat::Identity(d, d)));
    }
  }
  // Walk the second leg from p+1 to q through adjacent super-swaps.
  if (q > p + 1) {
    Mat P = super_permutation(sp);
    for (int k = p + 1; k < q; ++k) {
      Mat s = embed_pair(P, k, k + 1, nfactors, sp);
      out = s * out * s;
    }
  }
  return out;
}

Mat random_even_matrix(const GradedSpace& sp, Rng& rng) {
  Mat a = Mat::Zero(sp.dim, sp.dim);
  for (int i = 0; i < sp.dim; ++i)
    for (int j = 0; j < sp.dim; ++j)
      if (sp.parity[i] == sp.parity[j]) a(i, j) = rng.unit_disc();
  return a;
}

Mat random_odd_matrix(const GradedSpace& sp, Rng& rng) {
  Mat a = Mat::Zero(sp.dim, sp.dim);
  for (int i = 0; i < sp.dim; ++i)
    for (int j = 0; j < sp.dim; ++j)
      if (sp.parity[i] != sp.parity[j]) a(i, j) = rng.unit_disc();
  return a;
}

}  // namespace reflectchain
