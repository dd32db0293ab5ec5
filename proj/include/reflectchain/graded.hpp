#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "reflectchain/types.hpp"

namespace reflectchain {

enum class BasisKind { plain, distinguished, symmetric };

std::string to_string(BasisKind k);
BasisKind basis_kind_from_string(const std::string& s);

/// A Z2-graded vector space together with every sign convention the chain
/// constructions depend on: the parity vector, theta0, the V matrix entering
/// the crossing transposition and the crossing parameter rho.
struct GradedSpace {
  int M = 0;           // bosonic-sector size (total dimension when plain)
  int N = 0;           // fermionic-sector size (0 when plain)
  int dim = 0;         // M + N
  std::vector<int> parity;  // parity[i] in {0,1}, 0-based basis index
  int theta0 = 1;
  BasisKind kind = BasisKind::plain;
  Mat V;               // transposition twist, A^t = V^{-1} A^T V
  double rho = 0.0;    // crossing shift: N/2 (plain), theta0 (M-N)/2 (graded)
  // Sign in P Q = Q P = cp_sign Q. Equals theta0 except for the
  // distinguished basis with N odd, where only the opposite sign admits an
  // invertible crossing matrix V.
  int cp_sign = 1;

  int sign_of(int i) const { return parity[i] ? -1 : 1; }
  bool is_graded() const { return N > 0; }
};

/// Validated factory. theta0 is constrained by the basis: distinguished
/// requires +1, symmetric requires -1, plain theta0=-1 requires even size.
GradedSpace make_graded_space(int M, int N, BasisKind kind, int theta0);

/// Unvalidated variant used by property tests that need e.g. sl(1|1),
/// which the factory rejects (rho = 0 breaks crossing).
GradedSpace make_graded_space_unchecked(int M, int N, BasisKind kind, int theta0);

std::vector<int> product_parities(std::span<const int> pa, std::span<const int> pb);

/// Graded Kronecker product: entry ((i,j),(k,l)) carries (-1)^{[j]([i]+[k])}.
/// Reduces to the ordinary Kronecker product when either factor is even or
/// all parities vanish.
Mat graded_kron(const Mat& a, const Mat& b, std::span<const int> pa,
                std::span<const int> pb);

/// Plain Kronecker product (used for embeddings of parity-even operators).
Mat kron(const Mat& a, const Mat& b);

enum class TransposeKind { T, t };

/// Graded transposition (eq-style (-1)^{[i][j]+[j]} for T; t additionally
/// conjugates with V).
Mat super_transpose(const Mat& a, const GradedSpace& sp, TransposeKind kind);

/// Partial graded transposition acting on one tensor factor of an operator on
/// identical copies of `sp`. `kind` as above (t conjugates by V on that factor).
Mat super_transpose_factor(const Mat& op, int factor, int nfactors,
                           const GradedSpace& sp, TransposeKind kind);

/// Supertrace of a single-space matrix: sum_i (-1)^{[i]} A_ii.
cplx supertrace(const Mat& a, const GradedSpace& sp);

/// Traces out `factor` of an operator on nfactors copies of sp with weight
/// (-1)^{[i]}; equals the ordinary partial trace for all-even spaces.
Mat super_partial_trace(const Mat& op, int factor, int nfactors,
                        const GradedSpace& sp);

/// Super-permutation P = sum (-1)^{[j]} E_ij (x)_g E_ji on sp (x) sp.
Mat super_permutation(const GradedSpace& sp);

/// Q = P^{t_1}; obeys Q^2 = 2 rho Q and P Q = Q P = theta0 Q.
Mat crossed_permutation(const GradedSpace& sp);

/// Identity on n tensor copies of sp.
Mat identity_on(const GradedSpace& sp, int nfactors);

/// Embed a one-site operator at position pos of an nfactors product.
/// Valid for parity-even operators (everything the chain builds embeds).
Mat embed_site(const Mat& op, int pos, int nfactors, const GradedSpace& sp);

/// Embed a two-site (parity-even) operator on factors (p, q), p < q, of an
/// nfactors product; non-adjacent placement is routed via super-swaps.
Mat embed_pair(const Mat& op2, int p, int q, int nfactors, const GradedSpace& sp);

/// Random parity-preserving (even) matrix.
Mat random_even_matrix(const GradedSpace& sp, Rng& rng);

/// Random parity-reversing (odd) matrix; zero when the space is ungraded.
Mat random_odd_matrix(const GradedSpace& sp, Rng& rng);

}  // namespace reflectchain
