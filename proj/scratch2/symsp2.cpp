#include "reflectchain/spectrum.hpp"
#include <iostream>
using namespace reflectchain;
int main() {
  Rng rng = Rng::seeded(73);
  auto sp = make_graded_space(1, 2, BasisKind::symmetric, -1);
  auto dg = diagram_for_space(sp);
  auto id = make_K_identity(sp, BoundaryVariant::SP);
  for (int L : {1, 2}) {
    auto cfg = make_chain_config(sp, BoundaryVariant::SP, L, id, id);
    auto tf = build_transfer(cfg);
    auto rec = check_pseudo_vacuum(tf, dg, 4, rng.fork(L));
    std::cout << "SP sym sl(1|2) L=" << L << " pseudo-vacuum residual: " << rec.residual << "\n";
    // compare Lambda0 against the actual diagonal element <omega| t |omega>
    RationalFunction lam0 = pseudo_vacuum_eigenvalue(sp, dg, BoundaryVariant::SP, L, id);
    cplx x(0.63, 0.21);
    Vec omega = Vec::Zero(cfg.chain_dim()); omega(0) = 1.0;
    Mat tx = tf.t.eval(x);
    cplx actual = (omega.adjoint()*tx*omega);
    std::cout << "  Lambda0(x) = " << lam0.eval_unguarded(x) << " vs <w|t|w> = " << actual
              << "  |t w - <>w| = " << (tx*omega - actual*omega).norm() << "\n";
  }
  // Maybe the pseudo-vacuum for the symmetric SP chain is a different weight:
  // try each basis state as candidate eigenvector for L=1
  {
    auto cfg = make_chain_config(sp, BoundaryVariant::SP, 1, id, id);
    auto tf = build_transfer(cfg);
    cplx x(0.63, 0.21);
    Mat tx = tf.t.eval(x);
    for (int k = 0; k < 3; ++k) {
      Vec v = Vec::Zero(3); v(k) = 1.0;
      cplx d = (v.adjoint()*tx*v);
      std::cout << "  basis " << k << ": |t v - d v| = " << (tx*v - d*v).norm() << " d = " << d << "\n";
    }
  }
  return 0;
}
