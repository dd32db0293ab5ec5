#include "reflectchain/poly.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace reflectchain {

cplx ScalarPoly::eval(cplx x) const {
  cplx acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

ScalarPoly ScalarPoly::derivative() const {
  if (c.size() <= 1) return ScalarPoly::constant(0.0);
  std::vector<cplx> d(c.size() - 1);
  for (size_t k = 1; k < c.size(); ++k) d[k - 1] = static_cast<double>(k) * c[k];
  return ScalarPoly(std::move(d));
}

ScalarPoly ScalarPoly::shift(cplx a) const {
  const int n = degree();
  if (n < 0) return *this;
  std::vector<cplx> out(n + 1, 0.0);
  // binomial expansion of c_k (x + a)^k
  std::vector<cplx> apow(n + 1, 1.0);
  for (int k = 1; k <= n; ++k) apow[k] = apow[k - 1] * a;
  std::vector<std::vector<double>> binom(n + 1, std::vector<double>(n + 1, 0.0));
  for (int k = 0; k <= n; ++k) {
    binom[k][0] = 1.0;
    for (int j = 1; j <= k; ++j)
      binom[k][j] = binom[k - 1][j - 1] + (j <= k - 1 ? binom[k - 1][j] : 0.0);
  }
  for (int k = 0; k <= n; ++k)
    for (int j = 0; j <= k; ++j) out[j] += c[k] * binom[k][j] * apow[k - j];
  return ScalarPoly(std::move(out));
}

ScalarPoly ScalarPoly::negate_arg() const {
  std::vector<cplx> out(c);
  for (size_t k = 1; k < out.size(); k += 2) out[k] = -out[k];
  return ScalarPoly(std::move(out));
}

void ScalarPoly::trim(double tol) {
  double scale = 0.0;
  for (auto& v : c) scale = std::max(scale, std::abs(v));
  while (c.size() > 1 && std::abs(c.back()) <= tol * scale) c.pop_back();
  if (c.empty()) c.push_back(0.0);
}

double ScalarPoly::norm() const {
  double s = 0.0;
  for (auto& v : c) s += std::norm(v);
  return std::sqrt(s);
}

std::vector<cplx> ScalarPoly::roots() const {
  ScalarPoly p = *this;
  p.trim(1e-14);
  const int n = p.degree();
  if (n < 1) return {};
  Mat comp = Mat::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -p.c[i] / p.c[n];
  Eigen::ComplexEigenSolver<Mat> es(comp, false);
  std::vector<cplx> out(n);
  for (int i = 0; i < n; ++i) out[i] = es.eigenvalues()(i);
  return out;
}

ScalarPoly operator+(const ScalarPoly& p, const ScalarPoly& q) {
  std::vector<cplx> c(std::max(p.c.size(), q.c.size()), 0.0);
  for (size_t k = 0; k < p.c.size(); ++k) c[k] += p.c[k];
  for (size_t k = 0; k < q.c.size(); ++k) c[k] += q.c[k];
  return ScalarPoly(std::move(c));
}

ScalarPoly operator-(const ScalarPoly& p, const ScalarPoly& q) {
  return p + (cplx(-1.0) * q);
}

ScalarPoly operator*(const ScalarPoly& p, const ScalarPoly& q) {
  std::vector<cplx> c(p.c.size() + q.c.size() - 1, 0.0);
  for (size_t a = 0; a < p.c.size(); ++a)
    for (size_t b = 0; b < q.c.size(); ++b) c[a + b] += p.c[a] * q.c[b];
  return ScalarPoly(std::move(c));
}

ScalarPoly operator*(cplx s, const ScalarPoly& p) {
  std::vector<cplx> c(p.c);
  for (auto& v : c) v *= s;
  return ScalarPoly(std::move(c));
}

std::pair<ScalarPoly, ScalarPoly> poly_divmod(const ScalarPoly& p, const ScalarPoly& d) {
  ScalarPoly r = p, den = d;
  den.trim(1e-14);
  if (den.degree() == 0) {
    if (std::abs(den.c[0]) == 0.0) throw std::domain_error("poly_divmod: zero divisor");
    return {(cplx(1.0) / den.c[0]) * p, ScalarPoly::constant(0.0)};
  }
  std::vector<cplx> q(std::max<int>(0, r.degree() - den.degree()) + 1, 0.0);
  while (r.degree() >= den.degree() && r.norm() > 0.0) {
    int k = r.degree() - den.degree();
    cplx f = r.c.back() / den.c.back();
    q[k] = f;
    for (int j = 0; j <= den.degree(); ++j) r.c[k + j] -= f * den.c[j];
    r.c.pop_back();
    r.trim();
    if (std::abs(f) == 0.0) break;
  }
  return {ScalarPoly(std::move(q)), r};
}

MatrixPoly MatrixPoly::constant(const Mat& m) {
  return MatrixPoly({m}, static_cast<int>(m.rows()));
}

MatrixPoly MatrixPoly::from_scalar(const ScalarPoly& p, int dim) {
  std::vector<Mat> c;
  c.reserve(p.c.size());
  for (auto& v : p.c) c.push_back(v * Mat::Identity(dim, dim));
  return MatrixPoly(std::move(c), dim);
}

Mat MatrixPoly::eval(cplx x) const {
  Mat acc = Mat::Zero(dim, dim);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = x * acc + *it;
  return acc;
}

MatrixPoly MatrixPoly::derivative() const {
  if (c.size() <= 1) return MatrixPoly({Mat::Zero(dim, dim)}, dim);
  std::vector<Mat> d;
  d.reserve(c.size() - 1);
  for (size_t k = 1; k < c.size(); ++k) d.push_back(static_cast<double>(k) * c[k]);
  return MatrixPoly(std::move(d), dim);
}

MatrixPoly MatrixPoly::shift(cplx a) const {
  const int n = degree();
  std::vector<Mat> out(n + 1, Mat::Zero(dim, dim));
  std::vector<cplx> apow(n + 1, 1.0);
  for (int k = 1; k <= n; ++k) apow[k] = apow[k - 1] * a;
  std::vector<std::vector<double>> binom(n + 1, std::vector<double>(n + 1, 0.0));
  for (int k = 0; k <= n; ++k) {
    binom[k][0] = 1.0;
    for (int j = 1; j <= k; ++j)
      binom[k][j] = binom[k - 1][j - 1] + (j <= k - 1 ? binom[k - 1][j] : 0.0);
  }
  for (int k = 0; k <= n; ++k)
    for (int j = 0; j <= k; ++j) out[j] += binom[k][j] * apow[k - j] * c[k];
  return MatrixPoly(std::move(out), dim);
}

MatrixPoly MatrixPoly::negate_arg() const {
  std::vector<Mat> out(c);
  for (size_t k = 1; k < out.size(); k += 2) out[k] = -out[k];
  return MatrixPoly(std::move(out), dim);
}

void MatrixPoly::trim(double tol) {
  double scale = 0.0;
  for (auto& m : c) scale = std::max(scale, m.norm());
  while (c.size() > 1 && c.back().norm() <= tol * scale) c.pop_back();
  if (c.empty()) c.push_back(Mat::Zero(dim, dim));
}

double MatrixPoly::norm() const {
  double s = 0.0;
  for (auto& m : c) s += m.squaredNorm();
  return std::sqrt(s);
}

MatrixPoly MatrixPoly::left_mul(const Mat& m) const {
  std::vector<Mat> out;
  out.reserve(c.size());
  for (auto& x : c) out.push_back(m * x);
  return MatrixPoly(std::move(out), dim);
}

MatrixPoly MatrixPoly::right_mul(const Mat& m) const {
  std::vector<Mat> out;
  out.reserve(c.size());
  for (auto& x : c) out.push_back(x * m);
  return MatrixPoly(std::move(out), dim);
}

MatrixPoly MatrixPoly::conjugated(const Mat& s, const Mat& s_inv) const {
  std::vector<Mat> out;
  out.reserve(c.size());
  for (auto& x : c) out.push_back(s * x * s_inv);
  return MatrixPoly(std::move(out), dim);
}

MatrixPoly MatrixPoly::map(const std::function<Mat(const Mat&)>& fn) const {
  std::vector<Mat> out;
  out.reserve(c.size());
  for (auto& x : c) out.push_back(fn(x));
  int d = out.empty() ? 0 : static_cast<int>(out[0].rows());
  return MatrixPoly(std::move(out), d);
}

MatrixPoly operator+(const MatrixPoly& p, const MatrixPoly& q) {
  std::vector<Mat> c(std::max(p.c.size(), q.c.size()), Mat::Zero(p.dim, p.dim));
  for (size_t k = 0; k < p.c.size(); ++k) c[k] += p.c[k];
  for (size_t k = 0; k < q.c.size(); ++k) c[k] += q.c[k];
  return MatrixPoly(std::move(c), p.dim);
}

MatrixPoly operator-(const MatrixPoly& p, const MatrixPoly& q) {
  return p + (cplx(-1.0) * q);
}

MatrixPoly operator*(const MatrixPoly& p, const MatrixPoly& q) {
  if (p.dim != q.dim) throw std::invalid_argument("MatrixPoly product: dimension mismatch");
  std::vector<Mat> c(p.c.size() + q.c.size() - 1, Mat::Zero(p.dim, p.dim));
  for (size_t a = 0; a < p.c.size(); ++a)
    for (size_t b = 0; b < q.c.size(); ++b) c[a + b] += p.c[a] * q.c[b];
  return MatrixPoly(std::move(c), p.dim);
}

MatrixPoly operator*(cplx s, const MatrixPoly& p) {
  std::vector<Mat> c(p.c);
  for (auto& m : c) m *= s;
  return MatrixPoly(std::move(c), p.dim);
}

double max_coeff_distance(const MatrixPoly& p, const MatrixPoly& q) {
  double d = 0.0;
  size_t n = std::max(p.c.size(), q.c.size());
  for (size_t k = 0; k < n; ++k) {
    Mat a = k < p.c.size() ? p.c[k] : Mat(Mat::Zero(p.dim, p.dim));
    Mat b = k < q.c.size() ? q.c[k] : Mat(Mat::Zero(q.dim, q.dim));
    d = std::max(d, (a - b).norm());
  }
  return d;
}

cplx FactoredScalar::eval(cplx x) const {
  cplx v = pref;
  for (auto& z : zeros) v *= (x - z);
  for (auto& p : poles) v /= (x - p);
  return v;
}

cplx FactoredScalar::eval_residue(cplx pole, double tol) const {
  int best = -1;
  double bd = tol;
  for (size_t k = 0; k < poles.size(); ++k) {
    double d = std::abs(poles[k] - pole);
    if (d < bd) {
      bd = d;
      best = static_cast<int>(k);
    }
  }
  if (best < 0) throw std::domain_error("eval_residue: no pole at requested point");
  cplx v = pref;
  for (auto& z : zeros) v *= (pole - z);
  for (size_t k = 0; k < poles.size(); ++k)
    if (static_cast<int>(k) != best) v /= (pole - poles[k]);
  return v;
}

bool FactoredScalar::has_pole_at(cplx x, double tol) const {
  for (auto& p : poles)
    if (std::abs(p - x) < tol) return true;
  return false;
}

FactoredScalar FactoredScalar::inverse() const {
  FactoredScalar f;
  f.pref = 1.0 / pref;
  f.zeros = poles;
  f.poles = zeros;
  return f;
}

FactoredScalar FactoredScalar::shift(cplx a) const {
  FactoredScalar f = *this;
  for (auto& z : f.zeros) z -= a;
  for (auto& p : f.poles) p -= a;
  return f;
}

FactoredScalar FactoredScalar::negate_arg() const {
  // f(-x) = pref prod(-x - z)/prod(-x - p): flip roots, track (-1) factors.
  FactoredScalar f;
  f.pref = pref;
  int exp = static_cast<int>(zeros.size()) - static_cast<int>(poles.size());
  if (exp % 2 != 0) f.pref = -f.pref;
  for (auto& z : zeros) f.zeros.push_back(-z);
  for (auto& p : poles) f.poles.push_back(-p);
  return f;
}

FactoredScalar FactoredScalar::pow(int n) const {
  FactoredScalar f;
  f.pref = 1.0;
  for (int k = 0; k < n; ++k) f = f * (*this);
  return f;
}

ScalarPoly FactoredScalar::numerator_poly() const {
  ScalarPoly p = ScalarPoly::constant(pref);
  for (auto& z : zeros) p = p * ScalarPoly::monic_linear(z);
  return p;
}

ScalarPoly FactoredScalar::denominator_poly() const {
  ScalarPoly p = ScalarPoly::constant(1.0);
  for (auto& q : poles) p = p * ScalarPoly::monic_linear(q);
  return p;
}

FactoredScalar operator*(const FactoredScalar& a, const FactoredScalar& b) {
  FactoredScalar f;
  f.pref = a.pref * b.pref;
  f.zeros = a.zeros;
  f.zeros.insert(f.zeros.end(), b.zeros.begin(), b.zeros.end());
  f.poles = a.poles;
  f.poles.insert(f.poles.end(), b.poles.begin(), b.poles.end());
  // Cancel exactly coincident zero/pole pairs.
  for (size_t z = 0; z < f.zeros.size();) {
    bool cancelled = false;
    for (size_t p = 0; p < f.poles.size(); ++p) {
      if (f.zeros[z] == f.poles[p]) {
        f.zeros.erase(f.zeros.begin() + static_cast<long>(z));
        f.poles.erase(f.poles.begin() + static_cast<long>(p));
        cancelled = true;
        break;
      }
    }
    if (!cancelled) ++z;
  }
  return f;
}

FactoredScalar e_factor(double x) {
  if (x == 0.0) return FactoredScalar::one();
  return FactoredScalar::ratio(cplx(0.0, -x / 2.0), cplx(0.0, x / 2.0));
}

RationalFunction RationalFunction::from_factored(const FactoredScalar& f) {
  return {f.numerator_poly(), f.denominator_poly()};
}

cplx RationalFunction::eval(cplx x, double pole_radius) const {
  for (auto& p : pole_list())
    if (std::abs(x - p) < pole_radius)
      throw std::domain_error("RationalFunction: evaluation inside pole-exclusion radius");
  return eval_unguarded(x);
}

cplx RationalFunction::eval_unguarded(cplx x) const { return num.eval(x) / den.eval(x); }

const std::vector<cplx>& RationalFunction::pole_list() const {
  if (!cached_poles) cached_poles = den.roots();
  return *cached_poles;
}

std::pair<ScalarPoly, double> RationalFunction::to_polynomial() const {
  auto [q, r] = poly_divmod(num, den);
  double rel = r.norm() / std::max(1.0, num.norm());
  return {q, rel};
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
  return {a.num * b.den + b.num * a.den, a.den * b.den};
}

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
  return {a.num * b.num, a.den * b.den};
}

RationalFunction operator*(cplx s, const RationalFunction& a) { return {s * a.num, a.den}; }

}  // namespace reflectchain
