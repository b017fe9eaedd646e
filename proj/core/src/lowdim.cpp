#include "ht/lowdim.hpp"

#include <algorithm>
#include <cmath>

namespace ht {
namespace {

Vec star_pair(const Form& d, const Form& psi, const Form& vol) {
  return hodge(wedge(hodge(d, vol), psi), vol).to_vector();
}

void expect_small(const char* name, double r, double tol) {
  if (!(r <= tol)) throw InvariantError(name, r);
}

// matrix of x -> x _| psi for a two-form psi
Mat contraction_matrix(const Form& psi) {
  const int m = psi.dim();
  Mat P(m, m);
  for (int j = 0; j < m; ++j) P.col(j) = interior_basis(j, psi).to_vector();
  return P;
}

}  // namespace

Mat r_matrix(const CoForm& a, const SUStructure& s) {
  const int m = s.m();
  Mat r(m, m);
  for (int x = 0; x < m; ++x) {
    const Form px = interior_basis(x, s.psi_plus);
    for (int y = 0; y < m; ++y) r(x, y) = 0.5 * inner(px, a[y]);
  }
  return r;
}

std::pair<CoForm, CoForm> split_pm_n3(const CoForm& a, const SUStructure& s) {
  return TorsionEngine(s).split_pm(a);
}

LowDimReport recover_n3(const Form& dw, const Form& dpp, const Form& dpm, const SUStructure& s) {
  return recover_n3(TorsionEngine(s), dw, dpp, dpm);
}

LowDimReport recover_n3(const TorsionEngine& eng, const Form& dw, const Form& dpp, const Form& dpm,
                        double tol) {
  const SUStructure& s = eng.structure();
  if (s.n != 3) throw ContractViolation("recover_n3 needs n = 3");
  const int m = 6;
  const Mat& I = s.I;
  const Form& om = s.omega;
  LowDimReport r;
  r.n = 3;
  r.eta = eng.recover_eta(dw, dpp, dpm, tol);
  r.id_star_omega = star_pair(dw, om, s.vol);
  const Vec theta = -I * r.id_star_omega;
  r.w4 = eng.w4_from_theta(theta);
  {
    const Form tp = interior(theta, s.psi_plus);
    CoForm want(m, 3);
    for (int a = 0; a < m; ++a) want[a] = wedge(interior_basis(a, tp), om) * -0.25;
    const double res = relative_residual(eng.xi_plus(r.w4), want);
    expect_small("W4 image", res, tol);
  }

  r.w1_plus = hodge(wedge(dpm, om), s.vol).value() / 12.0;
  r.w1_minus = -hodge(wedge(dpp, om), s.vol).value() / 12.0;
  expect_small("W1 from d omega",
               relative_residual(eng.lambda().project(dw) / 3.0,
                                 s.psi_plus * r.w1_plus + s.psi_minus * r.w1_minus),
               tol);

  // "+" half of W1 + W2 from *d psi-
  const Form bm = hodge(dpm, s.vol);
  const CoForm eb = embed(bm);
  CoForm rhs3 = wedge(slot_apply(SlotOp::single(2), eb, I) - direction_i(eb, I), om);
  for (int x = 0; x < m; ++x) rhs3[x] -= wedge(Form::basis(m, {x}), om) * inner(bm, om);
  const CoForm a12p = eng.xi_inverse(rhs3 * 0.25, tol);

  // "-" half from *d psi+
  const Form bp = hodge(dpp, s.vol);
  CoForm rhs4 = wedge(embed(bp + total_i(bp, I)), om);
  for (int x = 0; x < m; ++x) rhs4[x] += wedge(Form::one_form(I.col(x)), om) * inner(bp, om);
  const CoForm a12m = eng.xi_inverse(rhs4 * -0.25, tol);

  {
    const Mat rp = r_matrix(a12p, s), rm = r_matrix(a12m, s);
    const double sc = std::max({1e-300, rp.norm(), rm.norm()});
    expect_small("r-symmetry of the + half", (rp - rp.transpose()).norm() / sc, tol);
    expect_small("r-skewness of the - half", (rm + rm.transpose()).norm() / sc, tol);
  }
  const CoForm w1p = embed(s.psi_plus) * r.w1_plus;
  const CoForm w1m = embed(s.psi_minus) * r.w1_minus;
  r.w1 = w1p + w1m;
  r.w2_plus = a12p - w1p;
  r.w2_minus = a12m - w1m;
  r.w2 = r.w2_plus + r.w2_minus;

  const Form dw4 = wedge(Form::one_form(r.id_star_omega), om) * -0.5;
  const Form dw3 = (3.0 * dw + l_op(dw, I)) / 4.0 - dw4;
  const CoForm e = embed(dw3);
  CoForm te(m, 2);
  for (int a = 0; a < m; ++a) te[a] = total_i(e[a], I);
  r.w3 = eng.xi_inverse(0.5 * eng.xi_plus(e - te), tol);

  eng.reassemble(r);
  eng.check_reassembly(r, dw, dpp, dpm, tol);
  return r;
}

std::pair<Vec, Vec> decompose_n2(const CoForm& a, const SUStructure& s) {
  if (s.n != 2) throw ContractViolation("decompose_n2 needs n = 2");
  const int m = s.m();
  const double q = inner(s.psi_plus, s.psi_plus);
  Vec xp(m), xm(m);
  for (int k = 0; k < m; ++k) {
    xp[k] = inner(a[k], s.psi_plus) / q;
    xm[k] = inner(a[k], s.psi_minus) / q;
  }
  return {xp, xm};
}

CoForm expand_n2(const Vec& xp, const Vec& xm, const SUStructure& s) {
  return tensor(xp, s.psi_plus) + tensor(xm, s.psi_minus);
}

bool is_w2_n2(const Vec& xp, const Vec& xm, const Mat& I, double tol) {
  return (xp - I * xm).norm() <= tol * std::max(1.0, xp.norm() + xm.norm());
}

bool is_w4_n2(const Vec& xp, const Vec& xm, const Mat& I, double tol) {
  return (xp + I * xm).norm() <= tol * std::max(1.0, xp.norm() + xm.norm());
}

std::pair<CoForm, CoForm> split_w2_w4_n2(const Vec& xp, const Vec& xm, const SUStructure& s) {
  const Mat& I = s.I;
  const CoForm w2 = expand_n2(0.5 * (xp + I * xm), 0.5 * (xm - I * xp), s);
  const CoForm w4 = expand_n2(0.5 * (xp - I * xm), 0.5 * (xm + I * xp), s);
  return {w2, w4};
}

LowDimReport recover_n2(const Form& dw, const Form& dpp, const Form& dpm, const SUStructure& s,
                        double tol) {
  if (s.n != 2) throw ContractViolation("recover_n2 needs n = 2");
  const TorsionEngine eng(s);
  const Vec A = star_pair(dpp, s.psi_plus, s.vol);
  const Vec B = star_pair(dpm, s.psi_minus, s.vol);
  const Vec C = star_pair(dw, s.omega, s.vol);
  LowDimReport r;
  r.n = 2;
  r.eta = eng.recover_eta(dw, dpp, dpm, tol);
  r.id_star_omega = C;
  const Vec u = (B - A - C) / 2.0;  // xi+ _| psi-
  const Vec v = (B - A + C) / 2.0;  // xi- _| psi+
  r.xi_plus = contraction_matrix(s.psi_minus).fullPivLu().solve(u);
  r.xi_minus = contraction_matrix(s.psi_plus).fullPivLu().solve(v);
  r.w1 = r.w3 = CoForm(s.m(), 2);
  std::tie(r.w2, r.w4) = split_w2_w4_n2(r.xi_plus, r.xi_minus, s);
  eng.reassemble(r);
  eng.check_reassembly(r, dw, dpp, dpm, tol);
  return r;
}

LowDimReport recover_n1(const Form& dpp, const Form& dpm, const SUStructure& s) {
  if (s.n != 1) throw ContractViolation("recover_n1 needs n = 1");
  LowDimReport r;
  r.n = 1;
  r.eta_plus = -hodge(dpm, s.vol).value();
  r.eta_minus = hodge(dpp, s.vol).value();
  r.eta = r.eta_plus * s.psi_plus.to_vector() + r.eta_minus * s.psi_minus.to_vector();
  r.id_star_omega = Vec::Zero(2);
  const Vec ieta = s.I * r.eta;
  r.nabla_omega = r.w1 = r.w2 = r.w3 = r.w4 = CoForm(2, 2);
  r.nabla_psi_plus = tensor(ieta, s.psi_minus) * -1.0;
  r.nabla_psi_minus = tensor(ieta, s.psi_plus);
  expect_small("reassembly d psi+", relative_residual(alternate(r.nabla_psi_plus), dpp), 1e-9);
  expect_small("reassembly d psi-", relative_residual(alternate(r.nabla_psi_minus), dpm), 1e-9);
  return r;
}

double curvature_n1(double ep, double em, const Vec& dep, const Vec& dem, const SUStructure& s) {
  if (s.n != 1) throw ContractViolation("curvature_n1 needs n = 1");
  return dep.dot(s.psi_plus.to_vector()) + dem.dot(s.psi_minus.to_vector()) - ep * ep - em * em;
}

}  // namespace ht
