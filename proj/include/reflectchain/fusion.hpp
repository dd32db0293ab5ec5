#pragma once

#include <functional>

#include "reflectchain/spectrum.hpp"

namespace reflectchain {

/// The * action unifying the SP and SNP fusion formulas: starred objects are
/// the unstarred ones for SP and the bar-swapped ones for SNP; L* counts the
/// physical sites.
struct StarTable {
  BoundaryVariant variant;
  bool swapped;                     // SNP: R* = Rbar, Rbar* = R, q* = qbar
  int Lstar;                        // SP: L, SNP: 2L
  ScalarPoly zeta_star;             // SP: zeta, SNP: zetabar
  ScalarPoly zetabar_star;
  std::function<cplx(cplx)> q_star; // SP: x - i rho, SNP: x + i
};

StarTable star_dispatch(const ScatteringPair& pair, BoundaryVariant variant, int L);

/// Pminus = Q / (2 rho), the projector onto the one-dimensional component of
/// fundamental (x) conjugate; Pplus its complement.
struct FusionProjectors {
  Mat Pminus;
  Mat Pplus;
};

FusionProjectors build_fusion_projectors(const ScatteringPair& pair);

/// Per-site projector identities Pminus Rbar*_{am}(x) R*_{bm}(x + i rho) =
/// zeta-type(x + i rho) Pminus, both index placements.
CheckRecord check_projector_identities(const ScatteringPair& pair, int samples, Rng rng,
                                       double tol = 1e-10);

/// Fused K matrices of the boundary fusion, evaluated at a spectral point;
/// operators act on the two auxiliary factors (0, 1) of the fusion space.
struct FusedOperators {
  // All numeric-at-lambda closures on the (2 auxiliaries + sites) space.
  std::function<Mat(cplx)> T_fused;      // T_{<a-bar b>}(lambda)
  std::function<Mat(cplx)> That_fused;   // That*_{<b a-bar>}(lambda + i rho)
  std::function<Mat(cplx)> Kminus_fused;
  std::function<Mat(cplx)> Kplus_fused;
  std::function<Mat(cplx)> t_fused;      // the traced fused transfer matrix
};

FusedOperators build_fused_operators(const ChainConfig& config);

/// Quantum determinants: delta[T], delta[That*], Delta[K*-], Delta[K*+] as
/// functions of lambda (projected-trace definitions) plus their closed forms
/// for identity boundaries.
struct QuantumDeterminant {
  std::function<cplx(cplx)> deltaT;
  std::function<cplx(cplx)> deltaThat;
  std::function<cplx(cplx)> DeltaKminus;
  std::function<cplx(cplx)> DeltaKplus;
  std::function<cplx(cplx)> deltaT_closed;      // zeta^{L*/2} zeta*^{L*/2} at x + i rho
  std::function<cplx(cplx)> DeltaKminus_closed; // q*(2x + i rho), up to recorded sign
  std::function<cplx(cplx)> DeltaKplus_closed;  // q*(-2x - 3 i rho)
  int closed_form_sign = 1;  // definition / closed form for the Delta[K]'s
  bool closed_forms_valid = false;  // identity boundaries only
};

QuantumDeterminant quantum_determinants(const ChainConfig& config);

/// delta[T] agreement between the projected-trace definition and the closed
/// form (identity boundaries).
CheckRecord check_quantum_determinants(const ChainConfig& config, int samples, Rng rng,
                                       double tol = 1e-10);

/// The fusion identity: t_F(x) = zeta*(2x + 2 i rho) tbar(x) t(x + i rho)
///                               - Delta[K*+] delta[T] Delta[K*-] delta[That*].
CheckRecord check_fusion_identity(const ChainConfig& config, int samples, Rng rng,
                                  double tol = 1e-8);

/// Appendix-B generalised fusion for plain sl(N):
/// ttilde(x) = prod_l t(x_l) - Delta{K*+} delta{T} Delta{K*-} delta{That*},
/// x_l = x + i(l-1), with the antisymmetriser built from the ordered
/// R-products; includes the trace-decoupling sub-check.
CheckRecord check_generalized_fusion(const ChainConfig& config, int samples, Rng rng,
                                     double tol = 1e-8);

/// Fused-transfer commutation with the unfused family at samples.
CheckRecord check_fused_commutation(const ChainConfig& config, int samples, Rng rng,
                                    double tol = 1e-9);

}  // namespace reflectchain
