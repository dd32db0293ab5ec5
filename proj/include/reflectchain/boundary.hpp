#pragma once

#include <optional>

#include "reflectchain/scattering.hpp"

namespace reflectchain {

enum class BoundaryVariant { SP, SNP };
enum class BoundarySide { minus, plus };

std::string to_string(BoundaryVariant v);
std::string to_string(BoundarySide s);

/// Description of a classified reflection-matrix family instance.
/// SP minus: K(lambda) = U (i xi + lambda E) U^{-1} with E = diag(signature)
/// (diagonalisable family) or K = i xi + lambda sigma with sigma strictly
/// triangular, sigma^2 = 0 (nilpotent family). SNP: a constant matrix with
/// K^t = +/- K.
struct BoundarySpec {
  BoundaryVariant variant = BoundaryVariant::SP;
  BoundarySide side = BoundarySide::minus;
  cplx xi = 0.0;                      // SP only
  bool xi_infinite = false;           // xi -> infinity limit: K = Id
  std::vector<int> signature;         // SP diagonal family, entries +/-1
  std::optional<Mat> nilpotent_sigma; // SP non-diagonalisable family
  std::optional<Mat> conjugator_U;    // constant parity-preserving conjugator
  std::optional<Mat> snp_matrix;      // SNP constant matrix
  int snp_epsilon = 1;                // K^t = epsilon K
};

struct KMatrix {
  BoundarySpec spec;
  MatrixPoly poly;  // degree <= 1

  Mat eval(cplx lambda) const { return poly.eval(lambda); }
  bool constant() const { return poly.degree() == 0; }
};

/// Identity boundary (the xi -> infinity convention), valid for both variants.
KMatrix make_K_identity(const GradedSpace& sp, BoundaryVariant variant,
                        BoundarySide side = BoundarySide::minus);

/// SP minus-side family of the classification: diagonalisable case with
/// signature entries +/-1, optionally conjugated by a constant
/// parity-preserving U.
KMatrix make_K_SP(const GradedSpace& sp, cplx xi, const std::vector<int>& signature,
                  const std::optional<Mat>& U = std::nullopt);

/// SP minus-side nilpotent family: K = i xi Id + lambda sigma, sigma^2 = 0.
KMatrix make_K_SP_nilpotent(const GradedSpace& sp, cplx xi, const Mat& sigma);

/// Dual (plus-side) matrix K^+(lambda) = K^t(-lambda - i rho).
KMatrix make_K_SP_dual(const KMatrix& K, const GradedSpace& sp);

/// Anti-soliton partner: Kbar = i xi' + lambda E^t with
/// xi' = rho Str(E) - xi; the pair (K, Kbar) solves the compatibility
/// equation coupling soliton and anti-soliton reflection.
KMatrix make_K_pair_SP(const KMatrix& K, const GradedSpace& sp);

/// SNP minus-side matrix: constant, invertible, K^t = +/- K (validated).
KMatrix make_K_SNP(const GradedSpace& sp, const Mat& ktilde, double tol = 1e-9);

/// SNP partner: proportional to the inverse, normalised to det 1.
KMatrix make_K_pair_SNP(const KMatrix& K, const GradedSpace& sp);

enum class ReflectionEq {
  re,               // soliton in, soliton out
  re2,              // soliton in, anti-soliton out (SNP)
  re3,              // SP compatibility of (K, Kbar)
  re4,              // SNP compatibility of (Ktilde, Ktilde_bar)
  re_plus,          // dual SP equation for K^+
  re_plus_SNP_ss,   // dual SNP, both unbarred
  re_plus_SNP_bb,   // dual SNP, both barred
  re_plus_SNP_sb,   // dual SNP, mixed
};

std::string to_string(ReflectionEq eq);

/// Samples the selected reflection equation at random spectral pairs.
/// Ka plays the role of the (possibly barred) first matrix, Kb the second.
CheckRecord check_reflection(const ScatteringPair& pair, const KMatrix& Ka,
                             const KMatrix& Kb, ReflectionEq eq, int samples,
                             Rng rng, double tol = 1e-10);

/// Constant-matrix diagonalisation of a classified SP K:
/// K(lambda) = U D(lambda) U^{-1} with D in signature-diagonal form.
/// Throws for the nilpotent family.
std::pair<Mat, KMatrix> diagonalize_K(const KMatrix& K, const GradedSpace& sp);

/// Non-diagonal example with corner entries 2 k lambda,
/// middle c lambda + i xi with c^2 = 4 k^2 + 1.
KMatrix make_K_corner_example(const GradedSpace& sp, double k, cplx xi);

}  // namespace reflectchain
