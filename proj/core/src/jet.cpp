#include "ht/jet.hpp"

#include <algorithm>

namespace ht {

SUTorsionJet zero_jet(const SUStructure& s) {
  const int m = s.m();
  return {s, Vec::Zero(m), std::vector<Mat>(m, Mat::Zero(m, m))};
}

void check_jet(const SUTorsionJet& jet, double tol) {
  const int m = jet.s.m();
  if (jet.eta.size() != m || static_cast<int>(jet.xi.size()) != m)
    throw ContractViolation("jet: eta and xi must have one entry per frame direction");
  double skew = 0, anti = 0;
  for (const Mat& x : jet.xi) {
    if (x.rows() != m || x.cols() != m) throw ContractViolation("jet: xi matrices must be 2n x 2n");
    const double sc = std::max(1.0, x.cwiseAbs().maxCoeff());
    skew = std::max(skew, (x + x.transpose()).cwiseAbs().maxCoeff() / sc);
    anti = std::max(anti, (x * jet.s.I + jet.s.I * x).cwiseAbs().maxCoeff() / sc);
  }
  if (!(skew <= tol)) throw InvariantError("xi skew-symmetry", skew);
  if (!(anti <= tol)) throw InvariantError("xi anticommutes with I", anti);
  if (!jet.eta.allFinite()) throw InvariantError("eta finite", INFINITY);
}

std::vector<Mat> torsion_endomorphisms(const SUTorsionJet& jet) {
  const Vec ieta = jet.s.I * jet.eta;
  std::vector<Mat> t;
  for (int a = 0; a < jet.s.m(); ++a) t.push_back(ieta[a] * jet.s.I + jet.xi[a]);
  return t;
}

Mat xi_from_alpha(const Mat& I, const Form& alpha) { return -0.5 * I * alpha.to_matrix(); }

SUTorsionJet jet_from_nabla_omega(const SUStructure& s, const Vec& eta, const CoForm& nabla_omega) {
  SUTorsionJet j{s, eta, {}};
  for (int a = 0; a < s.m(); ++a) j.xi.push_back(xi_from_alpha(s.I, nabla_omega[a]));
  return j;
}

}  // namespace ht
