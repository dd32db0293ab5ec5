#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "reflectchain/types.hpp"

namespace reflectchain {

/// Complex polynomial, constant term first.
struct ScalarPoly {
  std::vector<cplx> c;

  ScalarPoly() = default;
  explicit ScalarPoly(std::vector<cplx> coeffs) : c(std::move(coeffs)) { trim(); }
  static ScalarPoly constant(cplx v) { return ScalarPoly({v}); }
  static ScalarPoly monic_linear(cplx root) { return ScalarPoly({-root, 1.0}); }

  int degree() const { return static_cast<int>(c.size()) - 1; }
  cplx eval(cplx x) const;
  ScalarPoly derivative() const;
  ScalarPoly shift(cplx a) const;        // x -> x + a
  ScalarPoly negate_arg() const;         // x -> -x
  void trim(double tol = 0.0);
  double norm() const;

  /// Roots via the companion matrix; empty for constants.
  std::vector<cplx> roots() const;
};

ScalarPoly operator+(const ScalarPoly& p, const ScalarPoly& q);
ScalarPoly operator-(const ScalarPoly& p, const ScalarPoly& q);
ScalarPoly operator*(const ScalarPoly& p, const ScalarPoly& q);
ScalarPoly operator*(cplx s, const ScalarPoly& p);

/// Euclidean division p = q*d + r.
std::pair<ScalarPoly, ScalarPoly> poly_divmod(const ScalarPoly& p, const ScalarPoly& d);

/// Matrix-valued polynomial in the spectral parameter; exact carrier for
/// R(lambda), K(lambda), transfer matrices. Constant term first.
struct MatrixPoly {
  std::vector<Mat> c;
  int dim = 0;

  MatrixPoly() = default;
  MatrixPoly(std::vector<Mat> coeffs, int d) : c(std::move(coeffs)), dim(d) { trim(); }
  static MatrixPoly constant(const Mat& m);
  static MatrixPoly from_scalar(const ScalarPoly& p, int dim);

  int degree() const { return static_cast<int>(c.size()) - 1; }
  Mat eval(cplx x) const;  // Horner
  MatrixPoly derivative() const;
  MatrixPoly shift(cplx a) const;       // lambda -> lambda + a
  MatrixPoly negate_arg() const;        // lambda -> -lambda
  /// lambda -> -lambda - a  (crossing substitution)
  MatrixPoly crossed_arg(cplx a) const { return negate_arg().shift(a); }
  void trim(double tol = 0.0);
  double norm() const;

  MatrixPoly left_mul(const Mat& m) const;
  MatrixPoly right_mul(const Mat& m) const;
  MatrixPoly conjugated(const Mat& s, const Mat& s_inv) const;
  /// Apply fn to every coefficient (embedding, partial trace, transpose, ...).
  MatrixPoly map(const std::function<Mat(const Mat&)>& fn) const;
};

MatrixPoly operator+(const MatrixPoly& p, const MatrixPoly& q);
MatrixPoly operator-(const MatrixPoly& p, const MatrixPoly& q);
MatrixPoly operator*(const MatrixPoly& p, const MatrixPoly& q);
MatrixPoly operator*(cplx s, const MatrixPoly& p);

double max_coeff_distance(const MatrixPoly& p, const MatrixPoly& q);

/// Product of linear factors c * prod (x - zero_i) / prod (x - pole_i).
/// Exact carrier for e_x, g-functions and dressing functions; keeps poles
/// explicit so residues can be evaluated without cancellation noise.
struct FactoredScalar {
  cplx pref = 1.0;
  std::vector<cplx> zeros;
  std::vector<cplx> poles;

  static FactoredScalar one() { return {}; }
  static FactoredScalar linear(cplx root) {
    FactoredScalar f;
    f.zeros.push_back(root);
    return f;
  }
  /// (x - zero)/(x - pole)
  static FactoredScalar ratio(cplx zero, cplx pole) {
    FactoredScalar f;
    f.zeros.push_back(zero);
    f.poles.push_back(pole);
    return f;
  }

  cplx eval(cplx x) const;
  /// Evaluate with the single pole factor nearest `pole` removed, i.e. the
  /// residue numerator lim (x - pole) * f(x). Throws if no pole matches.
  cplx eval_residue(cplx pole, double tol = 1e-7) const;
  bool has_pole_at(cplx x, double tol = 1e-7) const;

  FactoredScalar inverse() const;
  FactoredScalar shift(cplx a) const;      // x -> x + a
  FactoredScalar negate_arg() const;       // x -> -x
  FactoredScalar crossed_arg(cplx a) const { return negate_arg().shift(a); }
  FactoredScalar pow(int n) const;         // n >= 0

  ScalarPoly numerator_poly() const;
  ScalarPoly denominator_poly() const;
};

FactoredScalar operator*(const FactoredScalar& a, const FactoredScalar& b);

/// e_x(lambda) = (lambda + ix/2)/(lambda - ix/2); e_0 = 1.
FactoredScalar e_factor(double x);

/// num/den rational function with pole-guarded evaluation.
struct RationalFunction {
  ScalarPoly num;
  ScalarPoly den = ScalarPoly::constant(1.0);

  RationalFunction() = default;
  RationalFunction(ScalarPoly n, ScalarPoly d) : num(std::move(n)), den(std::move(d)) {}

  static RationalFunction from_factored(const FactoredScalar& f);
  static RationalFunction from_poly(const ScalarPoly& p) { return {p, ScalarPoly::constant(1.0)}; }

  /// Throws std::domain_error within `pole_radius` of a denominator root.
  cplx eval(cplx x, double pole_radius = 1e-3) const;
  cplx eval_unguarded(cplx x) const;
  RationalFunction shift(cplx a) const { return {num.shift(a), den.shift(a)}; }
  RationalFunction negate_arg() const { return {num.negate_arg(), den.negate_arg()}; }

  /// Polynomial part and relative remainder norm of num/den.
  std::pair<ScalarPoly, double> to_polynomial() const;

  mutable std::optional<std::vector<cplx>> cached_poles;
  const std::vector<cplx>& pole_list() const;
};

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
RationalFunction operator*(cplx s, const RationalFunction& a);

}  // namespace reflectchain
