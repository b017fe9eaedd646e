#pragma once

#include <vector>

#include "ht/su_structure.hpp"

namespace ht {

// First-order germ of an SU(n)-structure: the intrinsic torsion eta (W5 one-form)
// and xi_a in u(n)-perp for each frame direction. The Levi-Civita derivative of
// any SU(n)-invariant form beta is nabla_a beta = -D_{T_a} beta with
// T_a = (I eta)_a I + xi_a.
struct SUTorsionJet {
  SUStructure s;
  Vec eta;
  std::vector<Mat> xi;
};

SUTorsionJet zero_jet(const SUStructure& s);
// Throws InvariantError naming "xi skew-symmetry" or "xi anticommutes with I".
void check_jet(const SUTorsionJet& jet, double tol = 1e-9);
// The skew endomorphisms T_a above.
std::vector<Mat> torsion_endomorphisms(const SUTorsionJet& jet);

// nabla_a omega = -D_{xi_a} omega is the I-anti-invariant two-form alpha_a;
// xi_a = -1/2 I mat(alpha_a) inverts it.
Mat xi_from_alpha(const Mat& I, const Form& alpha);
SUTorsionJet jet_from_nabla_omega(const SUStructure& s, const Vec& eta, const CoForm& nabla_omega);

}  // namespace ht
