#pragma once

#include <string>
#include <vector>

#include "ht/hermitian_ops.hpp"
#include "ht/jet.hpp"

namespace ht {

struct DerivedDerivatives {
  CoForm nabla_omega;
  CoForm nabla_psi_plus;
  CoForm nabla_psi_minus;
  Form d_omega;  // empty (dimension 0) when n = 1
  Form d_psi_plus;
  Form d_psi_minus;
  Vec dstar_omega;
  Form dstar_psi_plus;
  Form dstar_psi_minus;
  Form dstar_om_psi_plus;
  Form dstar_om_psi_minus;
};

// Class bits. At n = 3 the W1/W2 bits are replaced by their +/- halves.
enum TorsionClass : unsigned {
  kW1 = 1u << 0,
  kW2 = 1u << 1,
  kW3 = 1u << 2,
  kW4 = 1u << 3,
  kW5 = 1u << 4,
  kW1p = 1u << 5,
  kW1m = 1u << 6,
  kW2p = 1u << 7,
  kW2m = 1u << 8,
};
using ClassMask = unsigned;

// "{W1,W4}" style, in bit order.
std::string mask_to_string(ClassMask m);
// Comma separated names; throws ContractViolation on unknown names.
ClassMask parse_classes(const std::string& list);

struct TorsionReport {
  int n = 0;
  // Gray-Hervella parts of nabla omega
  CoForm w1, w2, w3, w4;
  Form b;                      // W1 parameter in [[lambda^{n-3,0}]], n >= 4
  double w1_plus = 0, w1_minus = 0;  // n = 3
  CoForm w2_plus, w2_minus;          // n = 3
  Vec xi_plus, xi_minus;             // n = 2 expansion coefficients
  double eta_plus = 0, eta_minus = 0;  // n = 1
  Vec eta;
  Vec id_star_omega;
  // reassembled first derivatives
  CoForm nabla_omega, nabla_psi_plus, nabla_psi_minus;
};

struct ComponentNorms {
  double w1 = 0, w2 = 0, w3 = 0, w4 = 0, w5 = 0;
  double w1_plus = 0, w1_minus = 0, w2_plus = 0, w2_minus = 0;
  double total = 0;
};

// Everything that depends only on the structure, built once: the Xi matrix on
// an orthonormal basis of [[lambda^{2,0}]], its QR factorization and the
// [[lambda^{p,0}]] projector. Immutable after construction.
class TorsionEngine {
 public:
  explicit TorsionEngine(const SUStructure& s);

  const SUStructure& structure() const { return s_; }
  const LambdaProjector& lambda() const { return lp_; }

  CoForm xi_plus(const CoForm& b) const;
  CoForm xi_minus(const CoForm& b) const;
  // Preimage under Xi+ of a CoForm in its image. Needs n >= 3.
  CoForm xi_inverse(const CoForm& c, double tol = 1e-8) const;

  // Gray-Hervella parts of an element of T*M (x) u(n)-perp; n >= 2.
  TorsionReport split(const CoForm& nabla_omega) const;
  TorsionReport project_nabla_omega(const DerivedDerivatives& d) const;

  Vec recover_eta(const Form& d_omega, const Form& d_psi_plus, const Form& d_psi_minus,
                  double tol = 1e-8) const;
  Form recover_w1(const Form& d_psi_plus, const Form& d_omega, double tol = 1e-8) const;
  std::pair<CoForm, CoForm> recover_w2_w3(const DerivedDerivatives& d, double tol = 1e-8) const;
  TorsionReport full_recover(const Form& d_omega, const Form& d_psi_plus, const Form& d_psi_minus,
                             double tol = 1e-8) const;

  // Fills nabla_omega = w1 + .. + w4 and nabla_psi+- (Xi images plus the W5 term).
  void reassemble(TorsionReport& r) const;
  // Throws InvariantError when the reassembled derivatives do not alternate to the inputs.
  void check_reassembly(const TorsionReport& r, const Form& d_omega, const Form& d_psi_plus,
                        const Form& d_psi_minus, double tol) const;

  // n = 3 only: r-symmetric and r-skew halves of an element of W1 + W2.
  std::pair<CoForm, CoForm> split_pm(const CoForm& a) const;

  // 4(n-2) a_{1,2} = (n-1)(n-2) a + 2 L(a), n >= 3
  Form part12(const Form& a) const;
  // -1/(2(n-1)) sum_a f_a (x) (f_a ^ theta - I f_a ^ I theta)
  CoForm w4_from_theta(const Vec& theta) const;
  // star relation giving d*psi+ and d*psi- from d psi+-
  std::pair<Form, Form> dstar_psi(const Form& d_psi_plus, const Form& d_psi_minus) const;

 private:
  SUStructure s_;
  LambdaProjector lp_;
  std::vector<Form> ubasis2_;  // orthonormal basis of [[lambda^{2,0}]]
  Mat xi_mat_;                 // columns Xi+(ubasis2_[k]) flattened
  Eigen::ColPivHouseholderQR<Mat> xi_qr_;
  // n = 3 W1 + W2 basis (flattened, orthonormal) and its r-images
  Mat w12_basis_;
  Eigen::ColPivHouseholderQR<Mat> r_qr_;
};

// All first derivatives of omega and psi+- at the point. The xi action on psi+-
// is computed twice (directly and through Xi+-) and must agree within tol.
DerivedDerivatives derive(const SUTorsionJet& jet, double tol = 1e-9);

CoForm xi_plus(const CoForm& b, const SUStructure& s);
CoForm xi_minus(const CoForm& b, const SUStructure& s);
CoForm xi_inverse(const CoForm& c, const SUStructure& s, double tol = 1e-8);
TorsionReport project_nabla_omega(const DerivedDerivatives& d, const SUStructure& s);
Vec recover_eta(const Form& d_omega, const Form& d_psi_plus, const Form& d_psi_minus, const SUStructure& s);
Form recover_w1(const Form& d_psi_plus, const Form& d_omega, const SUStructure& s);
std::pair<CoForm, CoForm> recover_w2_w3(const DerivedDerivatives& d, const SUStructure& s);
TorsionReport full_recover(const Form& d_omega, const Form& d_psi_plus, const Form& d_psi_minus,
                           const SUStructure& s);

ComponentNorms component_norms(const TorsionReport& r);
ClassMask classify(const TorsionReport& r, double threshold);

// nabla omega as the first-order jet of a W5-free structure
CoForm nabla_omega_of(const SUTorsionJet& jet);

}  // namespace ht
