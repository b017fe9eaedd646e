#include "ht/synth.hpp"

#include <cmath>

namespace ht {

CoForm random_u_perp(const SUStructure& s, Rng& rng) {
  const int m = s.m();
  const auto u = lambda_basis(2, s.unitary(), s.I);
  CoForm a(m, 2);
  for (int x = 0; x < m; ++x)
    for (const Form& f : u) a[x] += f * (rng.normal() / f.norm());
  return a;
}

SUTorsionJet synth_jet(const SUStructure& s, ClassMask classes, Rng& rng) {
  const int n = s.n, m = s.m();
  ClassMask allowed = kW5;
  if (n == 2) allowed |= kW2 | kW4;
  if (n == 3) allowed |= kW1 | kW2 | kW3 | kW4 | kW1p | kW1m | kW2p | kW2m;
  if (n >= 4) allowed |= kW1 | kW2 | kW3 | kW4;
  if (classes & ~allowed)
    throw ContractViolation("class " + mask_to_string(classes & ~allowed) + " does not exist for n = " +
                            std::to_string(n));
  if (n == 3) {
    if (classes & kW1) classes |= kW1p | kW1m;
    if (classes & kW2) classes |= kW2p | kW2m;
  }
  Vec eta = Vec::Zero(m);
  CoForm a(m, 2);
  if (n >= 2) {
    const TorsionEngine eng(s);
    const TorsionReport r = eng.split(random_u_perp(s, rng));
    if (n == 3) {
      if (classes & kW1p) a += embed(s.psi_plus) * r.w1_plus;
      if (classes & kW1m) a += embed(s.psi_minus) * r.w1_minus;
      if (classes & kW2p) a += r.w2_plus;
      if (classes & kW2m) a += r.w2_minus;
    } else {
      if (classes & kW1) a += r.w1;
      if (classes & kW2) a += r.w2;
    }
    if (classes & kW3) a += r.w3;
    if (classes & kW4) a += r.w4;
  }
  if (classes & kW5) eta = rng.normal_vec(m);
  return jet_from_nabla_omega(s, eta, a);
}

SUTorsionJet synth_jet(int n, ClassMask classes, std::uint64_t seed) {
  Rng rng(seed);
  return synth_jet(standard_structure(n), classes, rng);
}

}  // namespace ht
