#pragma once

#include <array>
#include <vector>

#include "ht/rng.hpp"
#include "ht/torsion_engine.hpp"

namespace ht {

// Flat almost hyperhermitian structure on R^{4n}. Index 0, 1, 2 stands for I, J, K.
struct HyperStructure {
  int n = 0;
  std::array<Mat, 3> A;
  std::array<Form, 3> omega;
  std::array<Form, 3> psi_plus;
  std::array<Form, 3> psi_minus;
  Form Omega;  // sum_A omega_A ^ omega_A
  Form vol;
  std::array<SUStructure, 3> su;  // the SU(2n)-structure of each A
  Mat sp_basis;    // columns: orthonormal coefficient vectors of sp(n) in so(4n)
  Mat perp_basis;  // columns: orthonormal coefficient vectors of sp(n)-perp

  int m() const { return 4 * n; }
  const Mat& I() const { return A[0]; }
  const Mat& J() const { return A[1]; }
  const Mat& K() const { return A[2]; }
  std::vector<Mat> perp_matrices() const;
};

struct HyperTorsionJet {
  HyperStructure s;
  std::vector<Mat> zeta;  // one skew endomorphism in sp(n)-perp per frame direction
};

HyperStructure build_hyper(int n);

// Coefficients of a skew matrix over e_i ^ e_j, i < j, and back.
Vec skew_coeffs(const Mat& X);
Mat skew_from_coeffs(const Vec& c, int m);
Mat project_sp_perp(const HyperStructure& s, const Mat& X);

// Throws InvariantError naming "zeta skew-symmetry" or "zeta orthogonal to sp(n)".
void check_hyper_jet(const HyperTorsionJet& jet, double tol = 1e-9);
HyperTorsionJet random_hyper_jet(const HyperStructure& s, Rng& rng);
// zeta_X = sp(n)-perp part of Y -> <X, Y> df - df(Y) X, the conformal change e^{2f} of the flat structure.
HyperTorsionJet lck_jet(const HyperStructure& s, const Vec& df);

// SU(2n) jet of structure a obtained by projecting zeta.
SUTorsionJet induced_jet(const HyperTorsionJet& jet, int a);

struct HyperDerived {
  std::array<DerivedDerivatives, 3> per;
  CoForm nabla_Omega;
  Form d_Omega;  // empty when n = 1
};
HyperDerived derive_hyper(const HyperTorsionJet& jet, double tol = 1e-9);

// (d psi_{A+}, d psi_{A-}) from d omega_B, d omega_C with (A, B, C) cyclic.
std::pair<Form, Form> dpsi_from_domegas(const Form& d_omega_b, const Form& d_omega_c,
                                        const HyperStructure& s, int a = 0);

struct HyperRecovery {
  std::array<TorsionReport, 3> reports;
  std::array<CoForm, 3> nabla_omega;
  CoForm nabla_Omega;
  std::vector<Mat> zeta;  // the common Sp(n) torsion
};
HyperRecovery hyper_recover(const Form& d_omega_i, const Form& d_omega_j, const Form& d_omega_k,
                            const HyperStructure& s, double tol = 1e-8);

struct LckReport {
  std::array<Vec, 3> theta;
  std::array<Vec, 3> eta;
  std::array<ClassMask, 3> classes{};
  double lee_spread = 0;          // max |theta_A - theta_I|
  double eta_theta_ratio = 0;     // <eta, theta> / |theta|^2, worst A
  double eta_residual = 0;        // |eta + theta / (2n)| / |theta|, worst A
  double invariant_residual = 0;  // |4n(2n-1) eta_A - A d*omega_A|, worst A
  bool classes_ok = false;
  bool pass = false;
};
LckReport lee_and_lck(const std::array<DerivedDerivatives, 3>& d, const HyperStructure& s,
                      double threshold = 1e-6);

struct KernelReport {
  int n = 0;
  int domain_dim = 0;
  int rank = 0;
  int su_domain_dim = 0;
  int su_rank = 0;
  bool pass = false;
};
KernelReport hyperkahler_kernel_check(int n);

}  // namespace ht
