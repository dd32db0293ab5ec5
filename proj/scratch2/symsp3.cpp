#include "reflectchain/spectrum.hpp"
#include <iostream>
using namespace reflectchain;
int main() {
  Rng rng = Rng::seeded(79);
  // Distinguished sl(1|2) (M < N): does the pseudo-vacuum formula hold there?
  {
    auto sp = make_graded_space(1, 2, BasisKind::distinguished, +1);
    auto dg = diagram_for_space(sp);
    auto id = make_K_identity(sp, BoundaryVariant::SP);
    auto tf = build_transfer(make_chain_config(sp, BoundaryVariant::SP, 1, id, id));
    auto rec = check_pseudo_vacuum(tf, dg, 4, rng.fork(1));
    std::cout << "SP dist sl(1|2) L=1 pseudo-vacuum residual: " << rec.residual << "\n";
  }
  // Symmetric sl(1|2) SP: ratio test. Lambda_sol / Lambda_vac (formulas)
  // vs the ED line ratio at sample points.
  {
    auto sp = make_graded_space(1, 2, BasisKind::symmetric, -1);
    auto dg = diagram_for_space(sp);
    auto id = make_K_identity(sp, BoundaryVariant::SP);
    auto cfg = make_chain_config(sp, BoundaryVariant::SP, 2, id, id);
    auto tf = build_transfer(cfg);
    auto eigs = diagonalize_transfer(tf, rng.fork(2));
    auto lines = group_spectrum(eigs);
    BetheSolveOptions opts; opts.seeds = 64;
    auto sol = solve_bethe(sp, dg, BoundaryVariant::SP, 2, id, {1}, rng.fork(3), opts);
    std::cout << "sym sl(1|2) SP L=2: lines " << lines.size() << ", counts{1} solutions " << sol.solutions.size() << "\n";
    if (!sol.solutions.empty()) {
      BetheRootSet vac; vac.roots = {{},{}};
      auto dv = dressed_eigenvalue(sp, dg, BoundaryVariant::SP, 2, id, vac);
      auto ds = dressed_eigenvalue(sp, dg, BoundaryVariant::SP, 2, id, sol.solutions[0]);
      std::cout << "  root: " << sol.solutions[0].roots[0][0] << "\n";
      // candidate ratio at samples vs all ED line-pair ratios
      for (cplx x : {cplx(0.41,0.17), cplx(-0.77,0.31)}) {
        cplx cand_ratio = ds.Lambda.eval_unguarded(x) / dv.Lambda.eval_unguarded(x);
        std::cout << "  x=" << x << " cand ratio " << cand_ratio << " ED ratios:";
        for (size_t a = 0; a < lines.size(); ++a)
          for (size_t b = 0; b < lines.size(); ++b)
            if (a != b) {
              cplx r = lines[a].Lambda.eval(x) / lines[b].Lambda.eval(x);
              if (std::abs(r - cand_ratio) < 1e-8) std::cout << " MATCH(" << a << "/" << b << ")";
            }
        std::cout << "\n";
      }
    }
  }
  return 0;
}
