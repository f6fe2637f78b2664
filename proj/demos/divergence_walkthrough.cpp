// End-to-end walkthrough: exact traces, angular averages, the coefficient
// table, and the assembled divergences, using the library directly.

#include <iostream>

#include "spintrace/expansion.hpp"

using namespace spintrace;

int main() {
  // a symbolic spin trace
  Idx mu = free_idx("mu"), nu = free_idx("nu");
  GammaWord w({GammaLetter::plain(mu), GammaLetter::plain(nu)});
  std::cout << "tr(gamma_mu gamma_nu) = " << gamma_trace(w).str() << "\n";

  // an angular average over the unit 3-sphere
  TensorExpr xi2 = TensorExpr::eta(xi_slot(fresh_xi_slot()), mu) *
                   TensorExpr::eta(xi_slot(fresh_xi_slot()), nu);
  std::cout << "<xi_mu xi_nu> = " << angular_average(xi2).str() << "\n\n";

  // the rank-4 structure constants for one chirality signature
  std::array<Idx, 4> nus = {nu_idx(0), nu_idx(1), nu_idx(2), nu_idx(3)};
  auto dec = decompose_rank4(compute_Jn({5, 0, 0, 5}), nus);
  std::cout << "signature (5,0,0,5): 3*(A,B,C,D) = (" << (grat(3) * dec.A).str() << ", "
            << (grat(3) * dec.B).str() << ", " << (grat(3) * dec.C).str() << ", "
            << (grat(3) * dec.D).str() << ")\n\n";

  // the assembled logarithmic divergence
  auto rep = compute_S_log_report();
  std::cout << "S_log = (1/24 pi^2) Int tr[ (F+F+ + F-F-)/2 ] + boundary + mass term\n";
  std::cout << "mass term: (" << rep.mass_coefficient_over_24pi2.get_str()
            << "/24 pi^2) m^2 Int tr C.C\n";
  std::cout << "pure-vector limit is the Yang-Mills form: "
            << (rep.c_zero_is_yang_mills ? "yes" : "no") << "\n";
  return 0;
}
