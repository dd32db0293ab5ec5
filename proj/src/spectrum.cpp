#include "reflectchain/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace reflectchain {

namespace {
constexpr double kPoleMatchTol = 1e-7;
}

bool DynkinDiagram::is_grey(int node) const {
  return std::find(grey_positions.begin(), grey_positions.end(), node) != grey_positions.end();
}

int DynkinDiagram::root_product(int l, int k) const {
  auto sgn = [&](int i) { return parities[i - 1] ? -1 : 1; };  // 1-based index
  if (l == k) return sgn(l) + sgn(l + 1);
  if (k == l + 1) return -sgn(l + 1);
  if (k == l - 1) return -sgn(l);
  return 0;
}

int DynkinDiagram::direction(int l) const {
  if (l < 1 || l > total - 1) throw std::invalid_argument("direction: node out of range");
  if (!is_grey(l)) return delta[l] > delta[l - 1] ? 1 : -1;
  for (int k = l + 1; k <= total - 1; ++k)
    if (delta[k] != delta[k - 1]) return delta[k] > delta[k - 1] ? 1 : -1;
  return -1;
}

DynkinDiagram make_dynkin_diagram(int total, std::vector<int> grey_positions) {
  DynkinDiagram dg;
  dg.total = total;
  std::sort(grey_positions.begin(), grey_positions.end());
  for (size_t i = 0; i < grey_positions.size(); ++i) {
    if (grey_positions[i] < 1 || grey_positions[i] >= total)
      throw std::invalid_argument("grey position out of range");
    if (i > 0 && grey_positions[i] == grey_positions[i - 1])
      throw std::invalid_argument("duplicate grey position");
  }
  dg.grey_positions = grey_positions;
  dg.parities.assign(total, 0);
  for (int i = 1; i < total; ++i)
    dg.parities[i] = dg.parities[i - 1] ^ (dg.is_grey(i) ? 1 : 0);
  dg.delta.assign(total, 0);
  int greys_below = 0;
  for (int l = 1; l < total; ++l) {
    if (dg.is_grey(l)) {
      dg.delta[l] = dg.delta[l - 1];
      ++greys_below;
    } else {
      dg.delta[l] = dg.delta[l - 1] + ((greys_below % 2 == 0) ? 1 : -1);
    }
  }
  dg.M = static_cast<int>(std::count(dg.parities.begin(), dg.parities.end(), 0));
  dg.N = total - dg.M;
  return dg;
}

DynkinDiagram diagram_for_space(const GradedSpace& sp) {
  std::vector<int> greys;
  switch (sp.kind) {
    case BasisKind::plain: break;
    case BasisKind::distinguished: greys = {sp.M}; break;
    case BasisKind::symmetric: greys = {sp.N / 2, sp.M + sp.N / 2}; break;
  }
  DynkinDiagram dg = make_dynkin_diagram(sp.dim, greys);
  if (dg.parities != sp.parity)
    throw std::logic_error("diagram parities disagree with the space grading");
  return dg;
}

int BetheRootSet::total_roots() const {
  int n = 0;
  for (auto& lvl : roots) n += static_cast<int>(lvl.size());
  return n;
}

bool BetheRootSet::valid(double tol) const {
  std::vector<cplx> all;
  for (auto& lvl : roots)
    for (auto& r : lvl) all.push_back(r);
  for (auto& r : all)
    if (std::abs(r) < tol) return false;
  for (size_t i = 0; i < all.size(); ++i)
    for (size_t j = i + 1; j < all.size(); ++j)
      if (std::abs(all[i] - all[j]) < tol || std::abs(all[i] + all[j]) < tol) return false;
  return true;
}

int bethe_rank(const GradedSpace& sp, const DynkinDiagram& dg, BoundaryVariant variant) {
  if (variant == BoundaryVariant::SP) return dg.total - 1;
  if (sp.kind == BasisKind::plain) return sp.dim / 2;
  return sp.N / 2 + sp.M / 2;  // n + floor(M/2)
}

namespace {

cplx ii(double x) { return cplx(0.0, x); }

void require_supported_boundary(const KMatrix& K) {
  if (K.spec.nilpotent_sigma)
    throw std::invalid_argument("spectrum formulas do not cover the nilpotent SP family");
  if (K.spec.variant == BoundaryVariant::SNP && K.spec.snp_epsilon == -1)
    throw std::invalid_argument("spectrum formulas cover epsilon = +1 SNP boundaries only");
}

// Block sizes (m1, m2, n2, n1) of a diagonal classified SP K-matrix in the
// distinguished ordering, read off the signature.
std::array<int, 4> sp_boundary_blocks(const GradedSpace& sp, const KMatrix& K) {
  Mat e = K.poly.c[1];
  std::vector<int> sig(sp.dim);
  for (int i = 0; i < sp.dim; ++i) {
    for (int j = 0; j < sp.dim; ++j)
      if (i != j && std::abs(e(i, j)) > 1e-12)
        throw std::invalid_argument("boundary g-functions need a diagonal classified K");
    double v = e(i, i).real();
    if (std::abs(v - 1.0) < 1e-9) sig[i] = 1;
    else if (std::abs(v + 1.0) < 1e-9) sig[i] = -1;
    else throw std::invalid_argument("boundary g-functions need signature entries +/-1");
  }
  int M = sp.kind == BasisKind::plain ? sp.dim : sp.M;
  int m1 = 0;
  while (m1 < M && sig[m1] == -1) ++m1;
  for (int i = m1; i < M; ++i)
    if (sig[i] != 1) throw std::invalid_argument("signature is not in (m1,m2,n2,n1) block order");
  int n2 = 0;
  while (M + n2 < sp.dim && sig[M + n2] == 1) ++n2;
  for (int i = M + n2; i < sp.dim; ++i)
    if (sig[i] != -1) throw std::invalid_argument("signature is not in (m1,m2,n2,n1) block order");
  return {m1, M - m1, n2, sp.dim - M - n2};
}

}  // namespace

std::vector<FactoredScalar> g_functions(const GradedSpace& sp, const DynkinDiagram& dg,
                                        BoundaryVariant variant, const KMatrix& Kminus) {
  require_supported_boundary(Kminus);
  const int d = sp.dim;
  std::vector<FactoredScalar> g(d);
  if (variant == BoundaryVariant::SP) {
    const double mn = sp.kind == BasisKind::plain ? sp.dim : (sp.M - sp.N);
    for (int l = 0; l < d; ++l) {
      FactoredScalar f;
      f.zeros = {cplx(0.0, 0.0), ii(-mn / 2.0)};
      f.poles = {ii(-dg.delta[l] / 2.0), ii(-(dg.delta[l] + 1) / 2.0)};
      g[l] = f;
    }
    if (!Kminus.spec.xi_infinite && !Kminus.constant()) {
      auto [m1, m2, n2, n1] = sp_boundary_blocks(sp, Kminus);
      if (sp.kind == BasisKind::symmetric)
        throw std::invalid_argument("boundary-dressed g-functions follow the distinguished ordering");
      const int M = sp.kind == BasisKind::plain ? sp.dim : sp.M;
      cplx xi = Kminus.spec.xi;
      for (int l = 0; l < d; ++l) {
        FactoredScalar extra;
        if (l < m1) {
          extra.pref = -1.0;
          extra.zeros = {I * xi};        // -lambda + i xi
        } else if (l < M + n2) {
          extra.zeros = {-I * (xi + cplx(m1))};  // lambda + i xi + i m1
        } else {
          extra.pref = -1.0;
          extra.zeros = {I * (xi - cplx(m2) + cplx(n2))};  // -lambda + i(xi - m2 + n2)
        }
        g[l] = g[l] * extra;
      }
    }
  } else {
    // SNP, plain or symmetric: same numerator/denominator shape, completed
    // by crossing on the upper half.
    const double rho = sp.rho;
    const double th = sp.theta0;
    int half = (d - 1) / 2;  // l < (d-1)/2 strictly; middle term when d odd
    for (int l = 0; l < d; ++l) g[l] = FactoredScalar::one();
    for (int l = 0; 2 * l < d - 1; ++l) {
      FactoredScalar f;
      f.zeros = {ii(-(rho - th) / 2.0)};
      f.poles = {ii(-rho / 2.0)};
      g[l] = f;
    }
    if (d % 2 == 1) g[half] = FactoredScalar::one();
    for (int l = (d % 2 == 1) ? half + 1 : d / 2; l < d; ++l)
      g[l] = g[d - 1 - l].crossed_arg(ii(rho));
    if (!Kminus.spec.xi_infinite && !Kminus.constant()) {
      throw std::invalid_argument("SNP boundary must be a constant matrix");
    }
    if (!Kminus.spec.xi_infinite) {
      Mat k0 = Kminus.poly.c[0];
      if ((k0 - Mat::Identity(d, d)).norm() > 1e-12) {
        for (int i = 0; i < d; ++i) {
          for (int j = 0; j < d; ++j)
            if (i != j && std::abs(k0(i, j)) > 1e-12)
              throw std::invalid_argument("SNP boundary g-functions need a diagonal Ktilde");
          if (std::abs(k0(i, i) - k0(d - 1 - i, d - 1 - i)) > 1e-9)
            throw std::invalid_argument("SNP diagonal Ktilde must satisfy k_{d+1-j} = k_j");
        }
        for (int l = 0; l < d; ++l) {
          FactoredScalar scale;
          scale.pref = k0(l, l);
          g[l] = g[l] * scale;
        }
      }
    }
  }
  return g;
}

std::vector<FactoredScalar> eigenvalue_prefactors(const GradedSpace& sp,
                                                  BoundaryVariant variant, int L) {
  const int d = sp.dim;
  FactoredScalar a = FactoredScalar::linear(-I);   // lambda + i
  FactoredScalar b = FactoredScalar::linear(0.0);  // lambda
  std::vector<FactoredScalar> pre(d);
  if (variant == BoundaryVariant::SP) {
    FactoredScalar alpha = (a * a).pow(L);
    FactoredScalar beta = (b * b).pow(L);
    for (int l = 0; l < d; ++l) pre[l] = (l == 0) ? alpha : beta;
  } else {
    cplx sh = ii(sp.rho);
    FactoredScalar ab = a.crossed_arg(sh);  // abar
    FactoredScalar bb = b.crossed_arg(sh);  // bbar
    FactoredScalar alpha = (a * bb * a * bb).pow(L);
    FactoredScalar beta = (b * bb * b * bb).pow(L);
    FactoredScalar gamma = (ab * b * ab * b).pow(L);
    for (int l = 0; l < d; ++l) pre[l] = (l == 0) ? alpha : (l == d - 1 ? gamma : beta);
  }
  return pre;
}

std::vector<double> eigenvalue_signs(const GradedSpace& sp, const DynkinDiagram& dg) {
  std::vector<double> s(sp.dim);
  for (int l = 0; l < sp.dim; ++l) s[l] = dg.parities[l] ? -1.0 : 1.0;
  return s;
}

namespace {

// One dressing block: product over the level's roots of
// (x + i s + i off_num)/(x + i s + i off_den) for x = lambda +/- root.
FactoredScalar dressing_block(const std::vector<cplx>& roots, double s, double off_num,
                              double off_den) {
  FactoredScalar f;
  for (cplx r : roots) {
    for (cplx x0 : {r, -r}) {
      // factor in lambda: (lambda - (x0 - i(s+off_num))) / (lambda - (x0 - i(s+off_den)))
      f.zeros.push_back(x0 - ii(s + off_num));
      f.poles.push_back(x0 - ii(s + off_den));
    }
  }
  return f;
}

const std::vector<cplx>& level_roots(const BetheRootSet& rs, int level) {
  static const std::vector<cplx> empty;
  if (level < 1 || level > rs.levels()) return empty;
  return rs.roots[level - 1];
}

}  // namespace

std::vector<FactoredScalar> dressing(const GradedSpace& sp, const DynkinDiagram& dg,
                                     BoundaryVariant variant, const BetheRootSet& roots) {
  const int d = sp.dim;
  std::vector<FactoredScalar> A(d, FactoredScalar::one());
  auto lv = [&](int level) -> const std::vector<cplx>& { return level_roots(roots, level); };

  if (variant == BoundaryVariant::SP) {
    A[0] = dressing_block(lv(1), 0.0, -0.5, 0.5);
    for (int l = 1; l < d; ++l) {
      if (dg.direction(l) > 0) {
        double s = dg.delta[l] / 2.0;
        A[l] = dressing_block(lv(l), s, 1.0, 0.0) * dressing_block(lv(l + 1), s, -0.5, 0.5);
      } else {
        double s = (dg.delta[l] + 1) / 2.0;
        A[l] = dressing_block(lv(l), s, -1.0, 0.0) * dressing_block(lv(l + 1), s, 0.5, -0.5);
      }
    }
    return A;
  }

  const cplx sh = ii(sp.rho);
  if (sp.kind == BasisKind::plain) {
    const int n = sp.dim / 2;  // folded rank
    A[0] = dressing_block(lv(1), 0.0, -0.5, 0.5);
    for (int l = 1; l <= n - 1 && 2 * l < d - 1; ++l)
      A[l] = dressing_block(lv(l), l / 2.0, 1.0, 0.0) *
             dressing_block(lv(l + 1), l / 2.0, -0.5, 0.5);
    if (d % 2 == 1) {
      double s = n / 2.0;
      A[n] = dressing_block(lv(n), s, 1.0, 0.0) * dressing_block(lv(n), s, -0.5, 0.5);
    }
    int first_crossed = (d % 2 == 1) ? n + 1 : n;
    for (int l = first_crossed; l < d; ++l) A[l] = A[d - 1 - l].crossed_arg(sh);
    return A;
  }

  // SNP on the symmetric super basis, sl(M|2n).
  const int n = sp.N / 2;
  const int m = sp.M / 2;  // floor; M = 2m or 2m+1
  const int rank = n + m;
  A[0] = dressing_block(lv(1), 0.0, -0.5, 0.5);
  for (int l = 1; l <= n - 1; ++l)
    A[l] = dressing_block(lv(l), l / 2.0, 1.0, 0.0) *
           dressing_block(lv(l + 1), l / 2.0, -0.5, 0.5);
  for (int l = n; l <= n + m - 1 && 2 * (l - n) < sp.M - 1; ++l) {
    double s = n - l / 2.0;
    A[l] = dressing_block(lv(l), s, -1.0, 0.0) * dressing_block(lv(l + 1), s, 0.5, -0.5);
  }
  if (sp.M % 2 == 1) {
    double s = n - rank / 2.0;
    A[rank] = dressing_block(lv(rank), s, -1.0, 0.0) * dressing_block(lv(rank), s, 0.5, -0.5);
  }
  int first_crossed = (sp.M % 2 == 1) ? rank + 1 : rank;
  for (int l = first_crossed; l < d; ++l) A[l] = A[d - 1 - l].crossed_arg(sh);
  return A;
}

double bethe_pole_shift(const GradedSpace& sp, const DynkinDiagram& dg,
                        BoundaryVariant variant, int level) {
  if (variant == BoundaryVariant::SP) {
    if (dg.direction(level) > 0) return dg.delta[level] / 2.0;
    return (dg.delta[level] + 1) / 2.0;
  }
  if (sp.kind == BasisKind::plain) return level / 2.0;
  const int n = sp.N / 2;
  return level <= n ? level / 2.0 : n - level / 2.0;
}

RationalFunction assemble_eigenvalue(const GradedSpace& sp, const DynkinDiagram& dg,
                                     const std::vector<FactoredScalar>& g,
                                     const std::vector<FactoredScalar>& A,
                                     BoundaryVariant variant, int L) {
  if (g.size() != A.size()) throw std::invalid_argument("assemble_eigenvalue: length mismatch");
  auto pre = eigenvalue_prefactors(sp, variant, L);
  auto sgn = eigenvalue_signs(sp, dg);
  RationalFunction lambda{ScalarPoly::constant(0.0), ScalarPoly::constant(1.0)};
  for (size_t l = 0; l < g.size(); ++l) {
    FactoredScalar term = pre[l] * g[l] * A[l];
    term.pref *= sgn[l];
    lambda = lambda + RationalFunction::from_factored(term);
  }
  lambda.num.trim(1e-13);
  lambda.den.trim(1e-13);
  return lambda;
}

RationalFunction pseudo_vacuum_eigenvalue(const GradedSpace& sp, const DynkinDiagram& dg,
                                          BoundaryVariant variant, int L,
                                          const KMatrix& Kminus) {
  auto g = g_functions(sp, dg, variant, Kminus);
  std::vector<FactoredScalar> A(sp.dim, FactoredScalar::one());
  return assemble_eigenvalue(sp, dg, g, A, variant, L);
}

DressedEigenvalue dressed_eigenvalue(const GradedSpace& sp, const DynkinDiagram& dg,
                                     BoundaryVariant variant, int L,
                                     const KMatrix& Kminus, const BetheRootSet& roots) {
  DressedEigenvalue out;
  out.g = g_functions(sp, dg, variant, Kminus);
  out.A = dressing(sp, dg, variant, roots);
  out.Lambda = assemble_eigenvalue(sp, dg, out.g, out.A, variant, L);
  out.roots = roots;
  return out;
}

CheckRecord check_pseudo_vacuum(const TransferFamily& tf, const DynkinDiagram& dg,
                                int samples, Rng rng, double tol) {
  const ChainConfig& cfg = tf.config;
  RationalFunction lam0 =
      pseudo_vacuum_eigenvalue(cfg.space, dg, cfg.variant, cfg.L, cfg.Kminus);
  const long dim = cfg.chain_dim();
  Vec omega = Vec::Zero(dim);
  omega(0) = 1.0;  // all-first-basis-vector product state
  double worst = 0.0;
  int done = 0, guard = 0;
  while (done < samples && guard < 100 * samples) {
    ++guard;
    cplx x = rng.sample_lambda();
    cplx l0;
    try {
      l0 = lam0.eval(x);
    } catch (const std::domain_error&) {
      continue;
    }
    Mat tx = tf.t.eval(x);
    double res = (tx * omega - l0 * omega).norm() / std::max(1.0, tx.norm());
    worst = std::max(worst, res);
    ++done;
  }
  return CheckRecord::make("spectrum.pseudo_vacuum", worst, tol,
                           {{"samples", std::to_string(done)}});
}

std::vector<cplx> bethe_residuals(const GradedSpace& sp, const DynkinDiagram& dg,
                                  BoundaryVariant variant, int L, const KMatrix& Kminus,
                                  const BetheRootSet& roots) {
  auto g = g_functions(sp, dg, variant, Kminus);
  auto A = dressing(sp, dg, variant, roots);
  auto pre = eigenvalue_prefactors(sp, variant, L);
  auto sgn = eigenvalue_signs(sp, dg);
  const int d = sp.dim;
  std::vector<FactoredScalar> terms(d);
  for (int l = 0; l < d; ++l) {
    terms[l] = pre[l] * g[l] * A[l];
    terms[l].pref *= sgn[l];
  }
  std::vector<cplx> out;
  const int rank = bethe_rank(sp, dg, variant);
  for (int level = 1; level <= std::min(rank, roots.levels()); ++level) {
    double shift = bethe_pole_shift(sp, dg, variant, level);
    for (cplx root : roots.roots[level - 1]) {
      cplx pole = root - ii(shift);
      std::vector<int> carriers;
      for (int l = 0; l < d; ++l)
        if (terms[l].has_pole_at(pole, kPoleMatchTol)) carriers.push_back(l);
      if (carriers.size() != 2)
        throw std::domain_error("bethe_residuals: pole shared by " +
                                std::to_string(carriers.size()) +
                                " terms (root collision or boundary pole)");
      cplx r0 = terms[carriers[0]].eval_residue(pole, kPoleMatchTol);
      cplx r1 = terms[carriers[1]].eval_residue(pole, kPoleMatchTol);
      cplx ratio = -r1 / r0;
      cplx res;
      if (std::isfinite(std::abs(ratio)) && std::abs(ratio) > 0.0) {
        res = std::log(ratio);
        if (std::abs(res - cplx(0.0, 2.0 * M_PI)) < std::abs(res)) res -= cplx(0.0, 2.0 * M_PI);
        if (std::abs(res + cplx(0.0, 2.0 * M_PI)) < std::abs(res)) res += cplx(0.0, 2.0 * M_PI);
      } else {
        double scale = std::max({1.0, std::abs(r0), std::abs(r1)});
        res = (r0 + r1) / scale;
      }
      out.push_back(res);
    }
  }
  return out;
}

namespace {

BetheRootSet unflatten(const std::vector<cplx>& z, const std::vector<int>& counts) {
  BetheRootSet rs;
  size_t k = 0;
  for (int c : counts) {
    std::vector<cplx> lvl;
    for (int j = 0; j < c; ++j) lvl.push_back(z[k++]);
    rs.roots.push_back(lvl);
  }
  return rs;
}

BetheRootSet canonicalize(const BetheRootSet& rs) {
  BetheRootSet out = rs;
  for (auto& lvl : out.roots) {
    for (auto& r : lvl) {
      if (r.real() < -1e-9 || (std::abs(r.real()) <= 1e-9 && r.imag() < 0)) r = -r;
    }
    std::sort(lvl.begin(), lvl.end(), [](cplx a, cplx b) {
      if (std::abs(a.real() - b.real()) > 1e-9) return a.real() < b.real();
      return a.imag() < b.imag();
    });
  }
  return out;
}

bool same_root_set(const BetheRootSet& a, const BetheRootSet& b, double tol) {
  if (a.roots.size() != b.roots.size()) return false;
  for (size_t l = 0; l < a.roots.size(); ++l) {
    if (a.roots[l].size() != b.roots[l].size()) return false;
    for (size_t j = 0; j < a.roots[l].size(); ++j)
      if (std::abs(a.roots[l][j] - b.roots[l][j]) > tol) return false;
  }
  return true;
}

}  // namespace

BetheSolveResult solve_bethe(const GradedSpace& sp, const DynkinDiagram& dg,
                             BoundaryVariant variant, int L, const KMatrix& Kminus,
                             const std::vector<int>& counts, Rng rng,
                             const BetheSolveOptions& opts) {
  BetheSolveResult result;
  const int rank = bethe_rank(sp, dg, variant);
  if (static_cast<int>(counts.size()) > rank)
    throw std::invalid_argument("counts vector longer than the number of Bethe levels");
  std::vector<int> full_counts(rank, 0);
  for (size_t i = 0; i < counts.size(); ++i) full_counts[i] = counts[i];
  int total = std::accumulate(full_counts.begin(), full_counts.end(), 0);
  if (total > opts.max_total_roots)
    throw std::invalid_argument("total root count exceeds max_total_roots");
  if (total == 0) {
    result.solutions.push_back(unflatten({}, full_counts));
    result.converged = 1;
    result.attempted = 1;
    return result;
  }

  auto residual = [&](const std::vector<cplx>& z) {
    return bethe_residuals(sp, dg, variant, L, Kminus, unflatten(z, full_counts));
  };
  auto norm_inf = [](const std::vector<cplx>& v) {
    double m = 0.0;
    for (auto& x : v) m = std::max(m, std::abs(x));
    return m;
  };

  for (int seed = 0; seed < opts.seeds; ++seed) {
    ++result.attempted;
    std::vector<cplx> z(total);
    for (int k = 0; k < total; ++k) {
      double re = rng.uniform(0.12, 2.4);
      double im = 0.0;
      double pick = rng.uniform(0.0, 1.0);
      if (pick < 0.35) im = 0.5 + rng.uniform(-0.08, 0.08);        // near i/2 strings
      else if (pick < 0.5) im = -0.5 + rng.uniform(-0.08, 0.08);
      else im = rng.uniform(-0.08, 0.08);
      z[k] = cplx(re, im);
    }
    std::vector<cplx> r;
    try {
      r = residual(z);
    } catch (const std::domain_error&) {
      continue;
    }
    double rn = norm_inf(r);
    bool ok = false;
    for (int it = 0; it < opts.max_iterations; ++it) {
      if (rn < 1e-11) {
        ok = true;
        break;
      }
      // Complex Jacobian by central differences.
      const double h = 1e-7;
      Mat J(total, total);
      bool jac_ok = true;
      for (int k = 0; k < total && jac_ok; ++k) {
        auto zp = z, zm = z;
        zp[k] += h;
        zm[k] -= h;
        try {
          auto rp = residual(zp);
          auto rm = residual(zm);
          for (int i = 0; i < total; ++i) J(i, k) = (rp[i] - rm[i]) / (2.0 * h);
        } catch (const std::domain_error&) {
          jac_ok = false;
        }
      }
      if (!jac_ok) break;
      Vec rv(total);
      for (int i = 0; i < total; ++i) rv(i) = r[i];
      Vec dz = J.colPivHouseholderQr().solve(-rv);
      double step = 1.0;
      bool improved = false;
      for (int halving = 0; halving < 25; ++halving) {
        auto zn = z;
        for (int k = 0; k < total; ++k) zn[k] += step * dz(k);
        try {
          auto rnvec = residual(zn);
          double rnn = norm_inf(rnvec);
          if (rnn < rn) {
            z = zn;
            r = rnvec;
            rn = rnn;
            improved = true;
            break;
          }
        } catch (const std::domain_error&) {
          // step wandered onto a pole; damp further
        }
        step *= 0.5;
      }
      if (!improved) break;
    }
    if (!ok) continue;
    BetheRootSet rs = canonicalize(unflatten(z, full_counts));
    if (!rs.valid()) continue;
    // Final residual must hold at the canonical representative too.
    try {
      if (norm_inf(bethe_residuals(sp, dg, variant, L, Kminus, rs)) > opts.tolerance) continue;
    } catch (const std::domain_error&) {
      continue;
    }
    ++result.converged;
    bool dup = false;
    for (auto& s : result.solutions)
      if (same_root_set(s, rs, 1e-6)) {
        dup = true;
        break;
      }
    if (!dup) result.solutions.push_back(rs);
  }
  return result;
}

std::vector<EigenLine> diagonalize_transfer(const TransferFamily& tf, Rng rng, double tol) {
  const MatrixPoly& t = tf.t;
  const long dim = t.c[0].rows();
  std::vector<cplx> samples = {cplx(0.41, 0.13), cplx(-0.67, 0.29), cplx(0.93, -0.37)};
  for (int attempt = 0; attempt < 3; ++attempt) {
    cplx c = rng.unit_disc() + cplx(1.5, 0.5);
    Mat A = t.eval(samples[0]) + c * t.eval(samples[1]);
    Eigen::ComplexEigenSolver<Mat> es(A);
    if (es.info() != Eigen::Success) continue;
    std::vector<EigenLine> out;
    bool all_ok = true;
    for (long k = 0; k < dim; ++k) {
      EigenLine line;
      line.vector = es.eigenvectors().col(k);
      cplx nn = line.vector.adjoint() * line.vector;
      std::vector<cplx> coeffs;
      for (auto& coeff_mat : t.c) {
        cplx v = (line.vector.adjoint() * coeff_mat * line.vector);
        coeffs.push_back(v / nn);
      }
      line.Lambda = ScalarPoly(coeffs);
      double worst = 0.0;
      for (cplx x : samples) {
        Mat tx = t.eval(x);
        Vec lhs = tx * line.vector;
        Vec rhs = line.Lambda.eval(x) * line.vector;
        worst = std::max(worst, (lhs - rhs).norm() / std::max(1.0, tx.norm()));
      }
      line.residual = worst;
      if (worst > tol) {
        all_ok = false;
        break;
      }
      out.push_back(std::move(line));
    }
    if (all_ok) return out;
  }
  throw std::runtime_error(
      "diagonalize_transfer: no generic combination separated the family (3 attempts)");
}

std::vector<SpectrumLine> group_spectrum(const std::vector<EigenLine>& eigs, double tol) {
  std::vector<SpectrumLine> lines;
  for (size_t k = 0; k < eigs.size(); ++k) {
    const ScalarPoly& lam = eigs[k].Lambda;
    bool placed = false;
    for (auto& line : lines) {
      double scale = std::max({1.0, line.Lambda.norm(), lam.norm()});
      ScalarPoly diff = line.Lambda - lam;
      if (diff.norm() < tol * scale) {
        line.members.push_back(static_cast<int>(k));
        ++line.multiplicity;
        placed = true;
        break;
      }
    }
    if (!placed) {
      SpectrumLine line;
      line.Lambda = lam;
      line.multiplicity = 1;
      line.members = {static_cast<int>(k)};
      lines.push_back(std::move(line));
    }
  }
  return lines;
}

MatchReport match_spectrum(const std::vector<SpectrumLine>& lines,
                           const std::vector<DressedEigenvalue>& candidates,
                           double tol) {
  MatchReport rep;
  std::vector<bool> line_hit(lines.size(), false);
  for (size_t c = 0; c < candidates.size(); ++c) {
    MatchReport::Entry e;
    e.candidate = static_cast<int>(c);
    auto [poly, rem] = candidates[c].Lambda.to_polynomial();
    if (rem > 1e-6) {
      e.analytic = false;
      e.distance = rem;
      rep.entries.push_back(e);
      ++rep.unmatched_candidates;
      continue;
    }
    double best = std::numeric_limits<double>::infinity();
    int best_line = -1;
    for (size_t l = 0; l < lines.size(); ++l) {
      ScalarPoly diff = lines[l].Lambda - poly;
      double scale = std::max({1.0, lines[l].Lambda.norm(), poly.norm()});
      double d = diff.norm() / scale;
      if (d < best) {
        best = d;
        best_line = static_cast<int>(l);
      }
    }
    e.distance = best;
    if (best < tol) {
      e.line = best_line;
      line_hit[best_line] = true;
      ++rep.matched;
    } else {
      ++rep.unmatched_candidates;
    }
    rep.entries.push_back(e);
  }
  for (bool h : line_hit)
    if (!h) ++rep.unmatched_lines;
  rep.completeness = lines.empty() ? 0.0
                                   : static_cast<double>(lines.size() - rep.unmatched_lines) /
                                         static_cast<double>(lines.size());
  return rep;
}

std::vector<Mat> snp_cartan_generators(const GradedSpace& sp, int sites) {
  const int d = sp.dim;
  std::vector<Mat> out;
  for (int l = 1; 2 * l <= d; ++l) {
    Mat e = Mat::Zero(d, d);
    e(l - 1, l - 1) = 0.5;
    e(d - l, d - l) = -0.5;
    long dim = 1;
    for (int s = 0; s < sites; ++s) dim *= d;
    Mat g = Mat::Zero(dim, dim);
    for (int s = 0; s < sites; ++s) g += embed_site(e, s, sites, sp);
    out.push_back(g);
  }
  return out;
}

}  // namespace reflectchain
