#pragma once

#include <optional>
#include <string>

#include "reflectchain/graded.hpp"
#include "reflectchain/poly.hpp"

namespace reflectchain {

/// R(lambda) = lambda Id + i P and its crossed partner
/// Rbar(lambda) = (-lambda - i rho) Id + i Q with Q = P^{t_1}, together with
/// the unitarity scalars zeta, zetabar. All objects act on sp (x) sp.
struct ScatteringPair {
  GradedSpace space;
  MatrixPoly R;
  MatrixPoly Rbar;
  Mat P;
  Mat Q;
  ScalarPoly zeta;     // (lambda + i)(-lambda + i)
  ScalarPoly zetabar;  // (lambda + i rho)(-lambda + i rho)
  std::optional<std::string> note;  // e.g. sl(2), theta0 = -1: Rbar prop. R

  cplx zeta_at(cplx x) const { return zeta.eval(x); }
  cplx zetabar_at(cplx x) const { return zetabar.eval(x); }
};

ScatteringPair build_scattering(const GradedSpace& sp);

enum class YbeKind { RRR, RbarRbarR };
enum class RKind { R, Rbar };

/// Samples the Yang-Baxter equation (or the mixed Rbar Rbar R variant) on
/// three tensor factors at random spectral-parameter pairs.
CheckRecord check_YBE(const ScatteringPair& pair, YbeKind which, int samples,
                      Rng rng, double tol = 1e-10);

/// Coefficient-wise check of R12(lambda) R21(-lambda) = zeta(lambda) Id
/// (or the Rbar variant with zetabar). Exact polynomial identity, no sampling.
CheckRecord check_unitarity(const ScatteringPair& pair, RKind which, double tol = 1e-10);

/// Coefficient-wise crossing-unitarity:
///   R^{t1}(lambda) R^{t2}(-lambda - 2 i rho) = zetabar(lambda + i rho)
/// and the Rbar counterpart with zeta.
CheckRecord check_crossing_unitarity(const ScatteringPair& pair, RKind which,
                                     double tol = 1e-10);

/// [A (x) A, R(lambda)] = 0 for random parity-even A, coefficient-wise.
CheckRecord check_AA_commutation(const ScatteringPair& pair, int trials, Rng rng,
                                 double tol = 1e-10);

/// R21 = R12 and the CP statement that both partial transpositions of the
/// crossing substitution give the same Rbar.
CheckRecord check_cp_symmetry(const ScatteringPair& pair, double tol = 1e-10);

}  // namespace reflectchain
