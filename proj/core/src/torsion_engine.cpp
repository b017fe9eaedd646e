#include "ht/torsion_engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ht/lowdim.hpp"

namespace ht {
namespace {

Vec flatten(const CoForm& b) {
  const int m = b.dim();
  const std::size_t k = binomial(m, b.degree());
  Vec v(m * k);
  for (int a = 0; a < m; ++a)
    for (std::size_t j = 0; j < k; ++j) v[a * k + j] = b[a][j];
  return v;
}

CoForm unflatten(const Vec& v, int m, int p) {
  const std::size_t k = binomial(m, p);
  CoForm b(m, p);
  for (int a = 0; a < m; ++a)
    for (std::size_t j = 0; j < k; ++j) b[a][j] = v[a * k + j];
  return b;
}

Vec form_vec(const Form& f) { return Eigen::Map<const Vec>(f.coeffs().data(), f.size()); }


template <class T>
void expect_close(const char* name, const T& got, const T& want, double tol) {
  const double r = relative_residual(got, want);
  if (!(r <= tol)) throw InvariantError(name, r);
}

// 1/2 sign sum_i (f_i _| alpha) ^ (f_i _| psi)
Form xi_apply(const Form& alpha, const std::vector<Form>& psi_int, double sign) {
  const int m = alpha.dim();
  Form r(m, psi_int.empty() ? 0 : psi_int[0].degree() + 1);
  for (int i = 0; i < m; ++i) {
    Form ai = interior_basis(i, alpha);
    if (ai.is_zero()) continue;
    r += wedge(ai, psi_int[i]);
  }
  return r * (0.5 * sign);
}

std::vector<Form> interiors(const Form& psi) {
  std::vector<Form> out;
  for (int i = 0; i < psi.dim(); ++i) out.push_back(interior_basis(i, psi));
  return out;
}

CoForm xi_map(const CoForm& b, const Form& psi, double sign) {
  const auto pi = interiors(psi);
  std::vector<Form> out;
  for (int a = 0; a < b.dim(); ++a) {
    Form r = xi_apply(b[a], pi, sign);
    if (r.degree() != psi.degree()) r = Form(psi.dim(), psi.degree());
    out.push_back(std::move(r));
  }
  return CoForm(std::move(out));
}

Vec star_pair(const Form& d, const Form& psi, const Form& vol) {
  return hodge(wedge(hodge(d, vol), psi), vol).to_vector();
}

}  // namespace

std::string mask_to_string(ClassMask m) {
  static const std::pair<ClassMask, const char*> order[] = {
      {kW1, "W1"}, {kW1p, "W1+"}, {kW1m, "W1-"}, {kW2, "W2"}, {kW2p, "W2+"},
      {kW2m, "W2-"}, {kW3, "W3"},  {kW4, "W4"},   {kW5, "W5"}};
  std::string out = "{";
  bool first = true;
  for (auto [bit, name] : order)
    if (m & bit) {
      if (!first) out += ",";
      out += name;
      first = false;
    }
  return out + "}";
}

ClassMask parse_classes(const std::string& list) {
  ClassMask m = 0;
  std::stringstream ss(list);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    if (tok == "W1") m |= kW1;
    else if (tok == "W2") m |= kW2;
    else if (tok == "W3") m |= kW3;
    else if (tok == "W4") m |= kW4;
    else if (tok == "W5") m |= kW5;
    else if (tok == "W1+") m |= kW1p;
    else if (tok == "W1-") m |= kW1m;
    else if (tok == "W2+") m |= kW2p;
    else if (tok == "W2-") m |= kW2m;
    else throw ContractViolation("unknown class name '" + tok + "'");
  }
  return m;
}

TorsionEngine::TorsionEngine(const SUStructure& s) : s_(s), lp_(s.I, s.unitary()) {
  const int n = s.n;
  for (const Form& f : lp_.basis(2)) ubasis2_.push_back(f / f.norm());
  const auto pi = interiors(s.psi_minus);
  const int rows = static_cast<int>(binomial(s.m(), n));
  xi_mat_ = Mat::Zero(rows, static_cast<int>(ubasis2_.size()));
  for (std::size_t k = 0; k < ubasis2_.size(); ++k)
    xi_mat_.col(k) = form_vec(xi_apply(ubasis2_[k], pi, 1.0));
  if (!ubasis2_.empty()) xi_qr_.compute(xi_mat_);

  if (n == 3) {
    const int m = s.m();
    Mat cols(m * binomial(m, 2), m * ubasis2_.size());
    int c = 0;
    for (int a = 0; a < m; ++a)
      for (const Form& u : ubasis2_) {
        CoForm e(m, 2);
        e[a] = u;
        const CoForm x = xi_plus(e);
        cols.col(c++) = flatten(xi_inverse(0.5 * (x + curly_l(x, s.I)), 1e-6));
      }
    Eigen::JacobiSVD<Mat> svd(cols, Eigen::ComputeThinU);
    int rank = 0;
    for (int k = 0; k < svd.singularValues().size(); ++k)
      if (svd.singularValues()[k] > 1e-9 * svd.singularValues()[0]) ++rank;
    w12_basis_ = svd.matrixU().leftCols(rank);
    Mat R(m * m, rank);
    for (int k = 0; k < rank; ++k) {
      const Mat r = r_matrix(unflatten(w12_basis_.col(k), m, 2), s);
      R.col(k) = Eigen::Map<const Vec>(r.data(), r.size());
    }
    r_qr_.compute(R);
  }
}

CoForm TorsionEngine::xi_plus(const CoForm& b) const { return xi_map(b, s_.psi_minus, 1.0); }
CoForm TorsionEngine::xi_minus(const CoForm& b) const { return xi_map(b, s_.psi_plus, -1.0); }

CoForm TorsionEngine::xi_inverse(const CoForm& c, double tol) const {
  const int m = s_.m();
  if (s_.n < 3) throw ContractViolation("xi_inverse needs n >= 3");
  if (c.dim() != m || c.degree() != s_.n) throw ContractViolation("xi_inverse: shape mismatch");
  CoForm out(m, 2);
  double res2 = 0;
  for (int a = 0; a < m; ++a) {
    const Vec rhs = form_vec(c[a]);
    const Vec y = xi_qr_.solve(rhs);
    res2 += (xi_mat_ * y - rhs).squaredNorm();
    for (int k = 0; k < y.size(); ++k) out[a] += ubasis2_[k] * y[k];
  }
  const double scale = c.norm();
  const double res = std::sqrt(res2);
  const double rel = scale > 1e-12 ? res / scale : res;
  if (!(rel <= tol)) throw InvariantError("xi image membership", rel);
  return out;
}

Form TorsionEngine::part12(const Form& a) const {
  const int n = s_.n;
  return (a * double((n - 1) * (n - 2)) + 2.0 * l_op(a, s_.I)) / double(4 * (n - 2));
}

CoForm TorsionEngine::w4_from_theta(const Vec& theta) const {
  const int m = s_.m(), n = s_.n;
  const Form th = Form::one_form(theta);
  const Form ith = Form::one_form(s_.I * theta);
  CoForm w(m, 2);
  for (int a = 0; a < m; ++a)
    w[a] = (wedge(Form::basis(m, {a}), th) - wedge(Form::one_form(s_.I.col(a)), ith)) *
           (-1.0 / (2.0 * (n - 1)));
  return w;
}

std::pair<Form, Form> TorsionEngine::dstar_psi(const Form& dpp, const Form& dpm) const {
  const double sg = sign_tri(s_.n);
  if (s_.n % 2 == 0) return {-sg * hodge(dpp, s_.vol), -sg * hodge(dpm, s_.vol)};
  return {sg * hodge(dpm, s_.vol), -sg * hodge(dpp, s_.vol)};
}

std::pair<CoForm, CoForm> TorsionEngine::split_pm(const CoForm& a) const {
  if (s_.n != 3) throw ContractViolation("split_pm needs n = 3");
  const Mat r = r_matrix(a, s_);
  const Mat sym = 0.5 * (r + r.transpose());
  const Vec rhs = Eigen::Map<const Vec>(sym.data(), sym.size());
  const Vec coef = r_qr_.solve(rhs);
  CoForm plus = unflatten(w12_basis_ * coef, s_.m(), 2);
  return {plus, a - plus};
}

TorsionReport TorsionEngine::split(const CoForm& a) const {
  const int n = s_.n, m = s_.m();
  if (n < 2) throw ContractViolation("split needs n >= 2");
  TorsionReport r;
  r.n = n;
  r.eta = Vec::Zero(m);
  r.w1 = r.w2 = r.w3 = r.w4 = CoForm(m, 2);
  const Vec theta = codifferentials(a, s_.I).first.to_vector();
  r.id_star_omega = s_.I * theta;
  if (n == 2) {
    std::tie(r.xi_plus, r.xi_minus) = decompose_n2(a, s_);
    std::tie(r.w2, r.w4) = split_w2_w4_n2(r.xi_plus, r.xi_minus, s_);
    return r;
  }
  const CoForm c = xi_plus(a);
  const CoForm p12 = xi_inverse((double(n - 2) * c + curly_l(c, s_.I)) * (1.0 / (2.0 * (n - 2))));
  r.w1 = embed(lp_.project(alternate(a)) / 3.0);
  r.w2 = p12 - r.w1;
  r.w4 = w4_from_theta(theta);
  r.w3 = a - p12 - r.w4;
  if (n == 3) {
    r.w1_plus = inner(r.w1, embed(s_.psi_plus)) / inner(embed(s_.psi_plus), embed(s_.psi_plus));
    r.w1_minus = inner(r.w1, embed(s_.psi_minus)) / inner(embed(s_.psi_minus), embed(s_.psi_minus));
    auto [pp, pm] = split_pm(p12);
    r.w2_plus = pp - embed(s_.psi_plus) * r.w1_plus;
    r.w2_minus = pm - embed(s_.psi_minus) * r.w1_minus;
  }
  return r;
}

TorsionReport TorsionEngine::project_nabla_omega(const DerivedDerivatives& d) const {
  if (s_.n < 3) throw ContractViolation("project_nabla_omega needs n >= 3; use lowdim");
  TorsionReport r = split(d.nabla_omega);
  r.eta = recover_eta(d.d_omega, d.d_psi_plus, d.d_psi_minus);
  if (s_.n >= 4) r.b = recover_w1(d.d_psi_plus, d.d_omega);
  reassemble(r);
  return r;
}

Vec TorsionEngine::recover_eta(const Form& dw, const Form& dpp, const Form& dpm, double tol) const {
  const int n = s_.n;
  if (n < 2) throw ContractViolation("recover_eta needs n >= 2; use recover_n1");
  const Form& pp = s_.psi_plus;
  const Form& pm = s_.psi_minus;
  const Vec idso = star_pair(dw, s_.omega, s_.vol);
  const Vec theta = -s_.I * idso;
  const Vec a = star_pair(dpp, pp, s_.vol);
  const Vec b = star_pair(dpm, pm, s_.vol);
  const double big = n * std::ldexp(1.0, n - 1), small = std::ldexp(1.0, n - 2);
  const Vec eta1 = (a + b - small * idso) / big;
  const Vec ieta2 = (star_pair(dpp, pm, s_.vol) - star_pair(dpm, pp, s_.vol) + small * theta) / big;
  const Vec eta2 = -s_.I * ieta2;
  expect_close("eta formulas agree", eta2, eta1, tol);
  if (n == 2) {
    const Vec eta = (a + b - idso) / 4.0;
    expect_close("eta four-dimensional formula", eta, eta1, tol);
    return eta;
  }
  expect_close("*dpsi+ ^ psi+ = *dpsi- ^ psi-", a, b, tol);
  expect_close("*dpsi+ ^ psi- = -*dpsi- ^ psi+", star_pair(dpp, pm, s_.vol),
               Vec(-star_pair(dpm, pp, s_.vol)), tol);
  return eta1;
}

Form TorsionEngine::recover_w1(const Form& dpp, const Form& dw, double tol) const {
  const int n = s_.n, m = s_.m();
  if (n < 4) throw ContractViolation("recover_w1 needs n >= 4; use lowdim");
  const Mat& I = s_.I;
  const Form b = total_i(hodge(wedge(dpp, s_.omega), s_.vol), I) * (-1.0 / 12.0);
  const Form ib = slot_apply(SlotOp::single(1), b, I);
  CoForm want(m, n);
  for (int a = 0; a < m; ++a)
    want[a] = wedge(wedge(Form::one_form(I.col(a)), b), s_.omega) + wedge(wedge(Form::basis(m, {a}), ib), s_.omega);
  const CoForm got = xi_plus(embed(lp_.project(dw) / 3.0));
  expect_close("W1 parameter reproduces Xi+(W1)", got, want, tol);
  return b;
}

std::pair<CoForm, CoForm> TorsionEngine::recover_w2_w3(const DerivedDerivatives& d, double tol) const {
  const int n = s_.n, m = s_.m();
  if (n < 4) throw ContractViolation("recover_w2_w3 needs n >= 4; use lowdim");
  const Mat& I = s_.I;
  const Form& om = s_.omega;
  const CoForm w1 = embed(lp_.project(d.d_omega) / 3.0);
  const CoForm nab1 = xi_plus(w1);

  auto [dsp, dsm] = dstar_psi(d.d_psi_plus, d.d_psi_minus);
  const Form a12 = part12(dsp);
  const Form ao12 = part12(dsm);  // (d*_omega psi+)_{1,2} = (d* psi-)_{1,2}
  CoForm lhs(m, n);
  for (int i = 0; i < m; ++i)
    lhs[i] = wedge(interior_basis(i, ao12), om) + wedge(interior(I.col(i), a12), om);
  const CoForm nab2 = 0.5 * lhs + 2.0 * nab1;
  const CoForm w2 = xi_inverse(nab2, tol);

  const Vec idso = star_pair(d.d_omega, om, s_.vol);
  const Form dw34 = (3.0 * d.d_omega + l_op(d.d_omega, I)) / 4.0;
  const Form dw4 = wedge(Form::one_form(idso), om) * (-1.0 / (n - 1));
  const CoForm e = embed(dw34 - dw4);
  CoForm te(m, 2);
  for (int a = 0; a < m; ++a) te[a] = total_i(e[a], I);
  const CoForm nab3 = 0.5 * xi_plus(e - te);
  const CoForm w3 = xi_inverse(nab3, tol);
  return {w2, w3};
}

void TorsionEngine::reassemble(TorsionReport& r) const {
  const int m = s_.m(), n = s_.n;
  CoForm nw = CoForm(m, 2);
  for (const CoForm* w : {&r.w1, &r.w2, &r.w3, &r.w4})
    if (w->dim() == m) nw += *w;
  r.nabla_omega = nw;
  const Vec ieta = s_.I * r.eta;
  r.nabla_psi_plus = xi_plus(nw) + tensor(ieta, s_.psi_minus) * double(-n);
  r.nabla_psi_minus = xi_minus(nw) + tensor(ieta, s_.psi_plus) * double(n);
}

void TorsionEngine::check_reassembly(const TorsionReport& r, const Form& dw, const Form& dpp,
                                     const Form& dpm, double tol) const {
  expect_close("reassembly d omega", alternate(r.nabla_omega), dw, tol);
  expect_close("reassembly d psi+", alternate(r.nabla_psi_plus), dpp, tol);
  expect_close("reassembly d psi-", alternate(r.nabla_psi_minus), dpm, tol);
}

TorsionReport TorsionEngine::full_recover(const Form& dw, const Form& dpp, const Form& dpm,
                                          double tol) const {
  const int n = s_.n, m = s_.m();
  if (n == 1) return recover_n1(dpp, dpm, s_);
  if (dw.dim() != m || dw.degree() != 3 || dpp.dim() != m || dpp.degree() != n + 1 ||
      dpm.dim() != m || dpm.degree() != n + 1)
    throw ContractViolation("full_recover: expected d omega of degree 3 and d psi of degree n+1");
  if (n == 2) return recover_n2(dw, dpp, dpm, s_, tol);
  if (n == 3) return recover_n3(*this, dw, dpp, dpm, tol);

  TorsionReport r;
  r.n = n;
  r.eta = recover_eta(dw, dpp, dpm, tol);
  r.id_star_omega = star_pair(dw, s_.omega, s_.vol);
  const Vec theta = -s_.I * r.id_star_omega;
  r.w4 = w4_from_theta(theta);
  {
    CoForm eq8(m, n);
    const Form tp = interior(theta, s_.psi_plus);
    for (int a = 0; a < m; ++a)
      eq8[a] = wedge(interior_basis(a, tp), s_.omega) * (-1.0 / (2.0 * (n - 1)));
    expect_close("W4 image", xi_plus(r.w4), eq8, tol);
  }
  r.w1 = embed(lp_.project(dw) / 3.0);
  r.b = recover_w1(dpp, dw, tol);
  DerivedDerivatives d;
  d.d_omega = dw;
  d.d_psi_plus = dpp;
  d.d_psi_minus = dpm;
  std::tie(r.w2, r.w3) = recover_w2_w3(d, tol);
  reassemble(r);
  check_reassembly(r, dw, dpp, dpm, tol);
  return r;
}

DerivedDerivatives derive(const SUTorsionJet& jet, double tol) {
  check_jet(jet);
  const SUStructure& s = jet.s;
  const int m = s.m();
  const auto T = torsion_endomorphisms(jet);
  DerivedDerivatives d;
  d.nabla_omega = CoForm(m, 2);
  d.nabla_psi_plus = CoForm(m, s.n);
  d.nabla_psi_minus = CoForm(m, s.n);
  for (int a = 0; a < m; ++a) {
    d.nabla_omega[a] = -derivation(T[a], s.omega);
    d.nabla_psi_plus[a] = -derivation(T[a], s.psi_plus);
    d.nabla_psi_minus[a] = -derivation(T[a], s.psi_minus);
  }
  // the xi part of nabla psi+- is Xi+-(nabla omega)
  {
    const Vec ieta = s.I * jet.eta;
    const CoForm xp = xi_map(d.nabla_omega, s.psi_minus, 1.0) + tensor(ieta, s.psi_minus) * double(-s.n);
    const CoForm xm = xi_map(d.nabla_omega, s.psi_plus, -1.0) + tensor(ieta, s.psi_plus) * double(s.n);
    expect_close("xi action on psi+", xp, d.nabla_psi_plus, tol);
    expect_close("xi action on psi-", xm, d.nabla_psi_minus, tol);
  }
  // no three-forms in dimension two
  if (m > 2) d.d_omega = alternate(d.nabla_omega);
  d.d_psi_plus = alternate(d.nabla_psi_plus);
  d.d_psi_minus = alternate(d.nabla_psi_minus);
  auto [dso, dsoo] = codifferentials(d.nabla_omega, s.I);
  (void)dsoo;
  d.dstar_omega = dso.to_vector();
  std::tie(d.dstar_psi_plus, d.dstar_om_psi_plus) = codifferentials(d.nabla_psi_plus, s.I);
  std::tie(d.dstar_psi_minus, d.dstar_om_psi_minus) = codifferentials(d.nabla_psi_minus, s.I);
  return d;
}

CoForm nabla_omega_of(const SUTorsionJet& jet) {
  const int m = jet.s.m();
  CoForm r(m, 2);
  for (int a = 0; a < m; ++a) r[a] = -derivation(jet.xi[a], jet.s.omega);
  return r;
}

CoForm xi_plus(const CoForm& b, const SUStructure& s) { return xi_map(b, s.psi_minus, 1.0); }
CoForm xi_minus(const CoForm& b, const SUStructure& s) { return xi_map(b, s.psi_plus, -1.0); }
CoForm xi_inverse(const CoForm& c, const SUStructure& s, double tol) {
  return TorsionEngine(s).xi_inverse(c, tol);
}
TorsionReport project_nabla_omega(const DerivedDerivatives& d, const SUStructure& s) {
  return TorsionEngine(s).project_nabla_omega(d);
}
Vec recover_eta(const Form& dw, const Form& dpp, const Form& dpm, const SUStructure& s) {
  return TorsionEngine(s).recover_eta(dw, dpp, dpm);
}
Form recover_w1(const Form& dpp, const Form& dw, const SUStructure& s) {
  return TorsionEngine(s).recover_w1(dpp, dw);
}
std::pair<CoForm, CoForm> recover_w2_w3(const DerivedDerivatives& d, const SUStructure& s) {
  return TorsionEngine(s).recover_w2_w3(d);
}
TorsionReport full_recover(const Form& dw, const Form& dpp, const Form& dpm, const SUStructure& s) {
  return TorsionEngine(s).full_recover(dw, dpp, dpm);
}

ComponentNorms component_norms(const TorsionReport& r) {
  ComponentNorms c;
  auto nrm = [](const CoForm& x) { return x.dim() ? x.norm() : 0.0; };
  c.w5 = r.eta.size() ? r.eta.norm() : 0.0;
  double sum = c.w5 * c.w5;
  if (r.n == 3) {
    // |x _| psi| summed over the frame: n <psi, psi> = 12
    c.w1_plus = std::abs(r.w1_plus) * std::sqrt(12.0);
    c.w1_minus = std::abs(r.w1_minus) * std::sqrt(12.0);
    c.w2_plus = nrm(r.w2_plus);
    c.w2_minus = nrm(r.w2_minus);
    sum += c.w1_plus * c.w1_plus + c.w1_minus * c.w1_minus + c.w2_plus * c.w2_plus +
           c.w2_minus * c.w2_minus;
  }
  c.w1 = nrm(r.w1);
  c.w2 = nrm(r.w2);
  c.w3 = nrm(r.w3);
  c.w4 = nrm(r.w4);
  if (r.n != 3) sum += c.w1 * c.w1 + c.w2 * c.w2;
  sum += c.w3 * c.w3 + c.w4 * c.w4;
  c.total = std::sqrt(sum);
  return c;
}

ClassMask classify(const TorsionReport& r, double threshold) {
  if (!(threshold > 0)) throw ContractViolation("classify: threshold must be positive");
  const ComponentNorms c = component_norms(r);
  if (c.total < 1e-12) return 0;
  const double cut = threshold * c.total;
  ClassMask m = 0;
  if (r.n == 3) {
    if (c.w1_plus > cut) m |= kW1p;
    if (c.w1_minus > cut) m |= kW1m;
    if (c.w2_plus > cut) m |= kW2p;
    if (c.w2_minus > cut) m |= kW2m;
  } else {
    if (c.w1 > cut) m |= kW1;
    if (c.w2 > cut) m |= kW2;
  }
  if (c.w3 > cut) m |= kW3;
  if (c.w4 > cut) m |= kW4;
  if (c.w5 > cut) m |= kW5;
  return m;
}

}  // namespace ht
