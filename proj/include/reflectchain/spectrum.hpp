#pragma once

#include "reflectchain/chain.hpp"

namespace reflectchain {

/// Simple-root system of sl(M|N) selected by the positions of its grey
/// (fermionic) dots; carries the derived parity sequence, the delta ladder
/// of the g-functions and the root scalar products.
struct DynkinDiagram {
  int total = 0;                    // M + N
  std::vector<int> grey_positions;  // 1-based, strictly increasing, < total
  std::vector<int> parities;        // basis-index parities, 0-based
  std::vector<int> delta;           // delta_l, l = 0..total-1
  int M = 0, N = 0;                 // bosonic / fermionic index counts

  bool is_grey(int node) const;     // node = 1..total-1
  /// Scalar product of simple roots (1-based l, k).
  int root_product(int l, int k) const;
  /// +1 in an increasing pole region, -1 in a decreasing one; greys adopt
  /// the direction of the following region.
  int direction(int l) const;
};

DynkinDiagram make_dynkin_diagram(int total, std::vector<int> grey_positions);
/// The diagram matching a space's basis: distinguished (single grey at M),
/// symmetric (greys at n and M+n) or plain (no greys).
DynkinDiagram diagram_for_space(const GradedSpace& sp);

/// Bethe roots grouped by level (level l = index l-1). Invariants: no root
/// within 1e-6 of 0, no pair lambda_i = +/- lambda_j within 1e-6.
struct BetheRootSet {
  std::vector<std::vector<cplx>> roots;

  int levels() const { return static_cast<int>(roots.size()); }
  int count(int level) const { return static_cast<int>(roots[level - 1].size()); }
  int total_roots() const;
  bool valid(double tol = 1e-6) const;
};

/// Number of independent Bethe levels: SP has total-1, SNP the folded rank.
int bethe_rank(const GradedSpace& sp, const DynkinDiagram& dg, BoundaryVariant variant);

/// The g-functions of the pseudo-vacuum eigenvalue, boundary-dressed when
/// Kminus is a nontrivial diagonal classified matrix. Throws for unsupported
/// boundaries (nilpotent SP family, antisymmetric SNP).
std::vector<FactoredScalar> g_functions(const GradedSpace& sp, const DynkinDiagram& dg,
                                        BoundaryVariant variant, const KMatrix& Kminus);

/// Prefactors alpha, beta, gamma raised to L, as factored scalars, ordered by
/// term: [0] = alpha^L, [1..d-2] = beta^L, [d-1] = gamma^L.
std::vector<FactoredScalar> eigenvalue_prefactors(const GradedSpace& sp,
                                                  BoundaryVariant variant, int L);

/// Supertrace sign of term l: (-1)^{parity[l]}.
std::vector<double> eigenvalue_signs(const GradedSpace& sp, const DynkinDiagram& dg);

/// Dressing functions A_l given the Bethe roots; identity dressing for an
/// empty root set.
std::vector<FactoredScalar> dressing(const GradedSpace& sp, const DynkinDiagram& dg,
                                     BoundaryVariant variant, const BetheRootSet& roots);

/// Canonical pole shift of level l: the level-l Bethe equation is the
/// residue cancellation at lambda_i^{(l)} - i * pole_shift(l).
double bethe_pole_shift(const GradedSpace& sp, const DynkinDiagram& dg,
                        BoundaryVariant variant, int level);

struct DressedEigenvalue {
  std::vector<FactoredScalar> g;
  std::vector<FactoredScalar> A;
  RationalFunction Lambda;
  BetheRootSet roots;
  std::string label;
};

RationalFunction assemble_eigenvalue(const GradedSpace& sp, const DynkinDiagram& dg,
                                     const std::vector<FactoredScalar>& g,
                                     const std::vector<FactoredScalar>& A,
                                     BoundaryVariant variant, int L);

RationalFunction pseudo_vacuum_eigenvalue(const GradedSpace& sp, const DynkinDiagram& dg,
                                          BoundaryVariant variant, int L,
                                          const KMatrix& Kminus);

DressedEigenvalue dressed_eigenvalue(const GradedSpace& sp, const DynkinDiagram& dg,
                                     BoundaryVariant variant, int L,
                                     const KMatrix& Kminus, const BetheRootSet& roots);

/// Pseudo-vacuum action check: || t(x) w - Lambda0(x) w || at samples.
CheckRecord check_pseudo_vacuum(const TransferFamily& tf, const DynkinDiagram& dg,
                                int samples, Rng rng, double tol = 1e-9);

/// One complex residual per (level, root): the principal-branch logarithm of
/// the residue-cancellation ratio of Lambda at the level's pole, with the
/// 2 pi i ambiguity minimised; zero vector iff the roots solve the Bethe
/// equations for this chain.
std::vector<cplx> bethe_residuals(const GradedSpace& sp, const DynkinDiagram& dg,
                                  BoundaryVariant variant, int L, const KMatrix& Kminus,
                                  const BetheRootSet& roots);

struct BetheSolveOptions {
  int seeds = 64;
  int max_iterations = 200;
  int max_total_roots = 6;
  double tolerance = 1e-10;
};

struct BetheSolveResult {
  std::vector<BetheRootSet> solutions;
  int attempted = 0;
  int converged = 0;
};

BetheSolveResult solve_bethe(const GradedSpace& sp, const DynkinDiagram& dg,
                             BoundaryVariant variant, int L, const KMatrix& Kminus,
                             const std::vector<int>& counts, Rng rng,
                             const BetheSolveOptions& opts = {});

/// Simultaneous diagonalisation of the commuting family: a generic linear
/// combination t(x1) + c t(x2) supplies the basis, the polynomial eigenvalue
/// of each vector is read off coefficient-wise.
struct EigenLine {
  Vec vector;
  ScalarPoly Lambda;
  double residual = 0.0;
};

std::vector<EigenLine> diagonalize_transfer(const TransferFamily& tf, Rng rng,
                                            double tol = 1e-8);

/// Distinct eigenvalue lines with multiplicities.
struct SpectrumLine {
  ScalarPoly Lambda;
  int multiplicity = 0;
  std::vector<int> members;  // indices into the EigenLine list
};

std::vector<SpectrumLine> group_spectrum(const std::vector<EigenLine>& eigs,
                                         double tol = 1e-7);

struct MatchReport {
  struct Entry {
    int candidate = -1;
    int line = -1;          // matched spectrum line, -1 if none
    double distance = 0.0;
    bool analytic = true;   // candidate Lambda was polynomial after division
  };
  std::vector<Entry> entries;
  int matched = 0;
  int unmatched_candidates = 0;
  int unmatched_lines = 0;
  double completeness = 0.0;  // fraction of distinct lines matched
};

MatchReport match_spectrum(const std::vector<SpectrumLine>& lines,
                           const std::vector<DressedEigenvalue>& candidates,
                           double tol = 1e-7);

/// Diagonal symmetry generators S_l = (E_ll - E_{l~ l~})/2 summed over chain
/// sites (SNP folding bookkeeping).
std::vector<Mat> snp_cartan_generators(const GradedSpace& sp, int sites);

}  // namespace reflectchain
