#include "ht/conformal.hpp"

#include "ht/torsion_engine.hpp"

namespace ht {

SUTorsionJet conformal_transform(const SUTorsionJet& jet, const ConformalChange& c) {
  const SUStructure& s = jet.s;
  const int m = s.m();
  if (s.n < 2) throw ContractViolation("conformal_transform needs n >= 2");
  if (c.df.size() != m) throw ContractViolation("conformal_transform: df has wrong dimension");
  check_jet(jet);
  const Mat& I = s.I;
  SUTorsionJet out = jet;
  Vec coef(m);
  for (int a = 0; a < m; ++a) {
    const Vec x = Vec::Unit(m, a);
    const Mat z = c.df * x.transpose() - x * c.df.transpose();  // -(S'_X)
    coef[a] = -(z * I).trace() / m;
    out.xi[a] += 0.5 * (z + I * z * I);
  }
  out.eta -= I * coef;
  return out;
}

Vec conformal_invariant(const SUTorsionJet& jet) {
  const int n = jet.s.n;
  const DerivedDerivatives d = derive(jet);
  return 2.0 * n * (n - 1) * jet.eta - jet.s.I * d.dstar_omega;
}

}  // namespace ht
