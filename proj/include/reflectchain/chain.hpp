#pragma once

#include "reflectchain/boundary.hpp"

namespace reflectchain {

/// Open-chain configuration. The auxiliary space is always tensor factor 0;
/// quantum sites occupy factors 1..sites (SP: sites = L, SNP: sites = 2L,
/// alternating fundamental/conjugate).
struct ChainConfig {
  GradedSpace space;
  BoundaryVariant variant = BoundaryVariant::SP;
  int L = 1;
  KMatrix Kminus;      // minus-side boundary (solves re / re2)
  KMatrix Kplus_base;  // minus-side matrix whose dual is used as K^+;
                       // identity by default (then K^+ = Id)
  int dim_cap = 2000;

  int sites() const { return variant == BoundaryVariant::SP ? L : 2 * L; }
  long chain_dim() const {
    long d = 1;
    for (int s = 0; s < sites(); ++s) d *= space.dim;
    return d;
  }
};

ChainConfig make_chain_config(const GradedSpace& sp, BoundaryVariant variant, int L,
                              const KMatrix& Kminus, const KMatrix& Kplus_base,
                              int dim_cap = 2000);

/// The commuting family {t(lambda), tbar(lambda)} as exact matrix
/// polynomials on the chain space, plus the monodromy polynomials on the
/// full (auxiliary x chain) space for asymptotics checks.
struct TransferFamily {
  ChainConfig config;
  MatrixPoly t;
  MatrixPoly tbar;
  MatrixPoly mono;     // K^+_a T_a K^-_a That_a before the auxiliary trace
  MatrixPoly monobar;
};

TransferFamily build_transfer_SP(const ChainConfig& config);
TransferFamily build_transfer_SNP(const ChainConfig& config);
TransferFamily build_transfer(const ChainConfig& config);

/// Max sampled commutator norm over a grid x grid set of spectral pairs,
/// covering [t,t], [t,tbar] and [tbar,tbar]; relative to operand norms.
CheckRecord check_commuting_family(const TransferFamily& tf, int grid,
                                   double tol = 1e-9);

/// Exhaustive variant: all coefficient pairs of the polynomials commute.
CheckRecord check_commuting_family_exhaustive(const TransferFamily& tf,
                                              double tol = 1e-9);

/// H = -1/2 dt/dlambda at 0 (SP), or -1/2 d(t tbar)/dlambda at 0 (SNP).
Mat extract_hamiltonian(const TransferFamily& tf);

/// The explicit local form of the SNP Hamiltonian (nearest plus
/// next-to-nearest neighbour terms, boundary corrections). Requires
/// Ktilde^{+-} = Id.
Mat build_local_hamiltonian_SNP(const ChainConfig& config);

/// Least-squares fit H ~ sum_i c_i B_i; returns coefficients and the
/// relative residual of the fit.
std::pair<std::vector<cplx>, double> affine_fit(const Mat& h, const std::vector<Mat>& basis);

enum class AlgebraTag { gl_block, so_N, sp_N };

struct SymmetryGeneratorSet {
  std::vector<std::pair<std::string, Mat>> generators;  // label, chain-space matrix
  AlgebraTag algebra_tag = AlgebraTag::gl_block;
  /// Cross-block counterexample generators (expected NOT to commute).
  std::vector<std::pair<std::string, Mat>> counterexamples;
};

/// SP with diagonal classified K^- and K^+ = Id: the gl(m) (+) gl(n) block
/// generators sum_j b_j^{alpha beta}.  SNP with Ktilde^- = Id: the so/sp
/// generators sum_i S_{0i} of the twisted-Yangian asymptotics.
SymmetryGeneratorSet build_symmetry_generators(const ChainConfig& config);

CheckRecord check_symmetry(const TransferFamily& tf, const SymmetryGeneratorSet& gens,
                           int samples, Rng rng, double tol = 1e-9);

/// Crossing relation for identity boundaries: SP t(lambda) = tbar(-lambda-i rho),
/// SNP t(lambda) = t(-lambda-i rho) (and likewise tbar). Coefficient-wise.
CheckRecord check_crossing(const TransferFamily& tf, double tol = 1e-10);

/// Exchange (reflection-algebra) relation of the monodromy matrix sampled at
/// spectral pairs; uses two auxiliary spaces.
CheckRecord check_monodromy_exchange(const ChainConfig& config, int samples, Rng rng,
                                     double tol = 1e-9);

}  // namespace reflectchain
