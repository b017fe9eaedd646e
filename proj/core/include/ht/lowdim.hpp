#pragma once

#include <utility>

#include "ht/torsion_engine.hpp"

namespace ht {

// The low-dimensional recoveries fill the relevant fields of a TorsionReport:
// n = 3: w1_plus, w1_minus, w2_plus, w2_minus, w3, w4, id_star_omega, eta;
// n = 2: xi_plus, xi_minus, w2, w4, eta; n = 1: eta_plus, eta_minus, eta.
using LowDimReport = TorsionReport;

// r-symmetric / r-skew halves of a in W1 + W2 at n = 3, r(a)(x, y) = 1/2 <x _| psi+, a_y>.
std::pair<CoForm, CoForm> split_pm_n3(const CoForm& a, const SUStructure& s);
// The bilinear form r(a) as a matrix.
Mat r_matrix(const CoForm& a, const SUStructure& s);

LowDimReport recover_n3(const Form& d_omega, const Form& d_psi_plus, const Form& d_psi_minus,
                        const SUStructure& s);
LowDimReport recover_n3(const TorsionEngine& eng, const Form& d_omega, const Form& d_psi_plus,
                        const Form& d_psi_minus, double tol = 1e-8);

// nabla omega = xi+ (x) psi+ + xi- (x) psi-
std::pair<Vec, Vec> decompose_n2(const CoForm& nabla_omega, const SUStructure& s);
CoForm expand_n2(const Vec& xi_plus, const Vec& xi_minus, const SUStructure& s);
bool is_w2_n2(const Vec& xi_plus, const Vec& xi_minus, const Mat& I, double tol = 1e-9);
bool is_w4_n2(const Vec& xi_plus, const Vec& xi_minus, const Mat& I, double tol = 1e-9);
// (W2 part, W4 part) of nabla omega at n = 2
std::pair<CoForm, CoForm> split_w2_w4_n2(const Vec& xi_plus, const Vec& xi_minus, const SUStructure& s);

LowDimReport recover_n2(const Form& d_omega, const Form& d_psi_plus, const Form& d_psi_minus,
                        const SUStructure& s, double tol = 1e-8);
LowDimReport recover_n1(const Form& d_psi_plus, const Form& d_psi_minus, const SUStructure& s);

// K(psi+, psi-) from eta+- and their first derivatives (second-order data).
double curvature_n1(double eta_plus, double eta_minus, const Vec& d_eta_plus, const Vec& d_eta_minus,
                    const SUStructure& s);

}  // namespace ht
