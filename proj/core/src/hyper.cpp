#include "ht/hyper.hpp"

#include <cmath>

#include "ht/hermitian_ops.hpp"

namespace ht {
namespace {

constexpr int kCyc[3][2] = {{1, 2}, {2, 0}, {0, 1}};

double factorial(int k) {
  double r = 1;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

// (re + i im) * (b + i c)
std::pair<Form, Form> cmul(const Form& re, const Form& im, const Form& b, const Form& c) {
  return {wedge(re, b) - wedge(im, c), wedge(re, c) + wedge(im, b)};
}

Vec coeffs_of(const std::vector<Form>& fs) {
  std::size_t total = 0;
  for (const Form& f : fs) total += f.size();
  Vec v(total);
  std::size_t k = 0;
  for (const Form& f : fs)
    for (double x : f.coeffs()) v[k++] = x;
  return v;
}

int numeric_rank(const Mat& M) {
  Eigen::JacobiSVD<Mat> svd(M);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) return 0;
  int r = 0;
  for (int k = 0; k < sv.size(); ++k)
    if (sv[k] > 1e-9 * sv[0]) ++r;
  return r;
}

}  // namespace

Vec skew_coeffs(const Mat& X) {
  const int m = static_cast<int>(X.rows());
  Vec c(m * (m - 1) / 2);
  int k = 0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) c[k++] = X(i, j);
  return c;
}

Mat skew_from_coeffs(const Vec& c, int m) {
  Mat X = Mat::Zero(m, m);
  int k = 0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      X(i, j) = c[k];
      X(j, i) = -c[k];
      ++k;
    }
  return X;
}

std::vector<Mat> HyperStructure::perp_matrices() const {
  std::vector<Mat> out;
  for (int k = 0; k < perp_basis.cols(); ++k) out.push_back(skew_from_coeffs(perp_basis.col(k), m()));
  return out;
}

HyperStructure build_hyper(int n) {
  if (n < 1 || n > 2) throw ContractViolation("build_hyper: n must be 1 or 2");
  const int m = 4 * n;
  HyperStructure s;
  s.n = n;
  Mat I = Mat::Zero(m, m), J = Mat::Zero(m, m);
  for (int k = 0; k < 2 * n; ++k) {
    I(k + 2 * n, k) = 1;
    I(k, k + 2 * n) = -1;
  }
  for (int i = 0; i < n; ++i) {
    J(n + i, i) = 1;
    J(i, n + i) = -1;
    J(3 * n + i, 2 * n + i) = -1;
    J(2 * n + i, 3 * n + i) = 1;
  }
  s.A = {I, J, I * J};
  for (int a = 0; a < 3; ++a) s.omega[a] = kahler_form(s.A[a]);
  const double c = sign_tri(n) * factorial(n);
  for (int a = 0; a < 3; ++a) {
    const Form& b = s.omega[kCyc[a][0]];
    const Form& cc = s.omega[kCyc[a][1]];
    Form re = Form::scalar(m, 1.0), im(m, 0);
    for (int k = 0; k < n; ++k) std::tie(re, im) = cmul(re, im, b, cc);
    s.psi_plus[a] = re / c;
    s.psi_minus[a] = im / c;
    s.su[a] = adapt(s.A[a], s.psi_plus[a], s.psi_minus[a]);
  }
  s.Omega = Form(m, 4);
  for (const Form& w : s.omega) s.Omega += wedge(w, w);
  s.vol = s.su[0].vol;

  const int d = m * (m - 1) / 2;
  Mat C(2 * m * m, d);
  for (int k = 0; k < d; ++k) {
    const Mat X = skew_from_coeffs(Vec::Unit(d, k), m);
    const Mat ci = X * I - I * X, cj = X * J - J * X;
    C.col(k) << Eigen::Map<const Vec>(ci.data(), ci.size()), Eigen::Map<const Vec>(cj.data(), cj.size());
  }
  Eigen::JacobiSVD<Mat> svd(C, Eigen::ComputeFullV);
  const int r = numeric_rank(C);
  s.perp_basis = svd.matrixV().leftCols(r);
  s.sp_basis = svd.matrixV().rightCols(d - r);
  return s;
}

Mat project_sp_perp(const HyperStructure& s, const Mat& X) {
  const Vec c = skew_coeffs(0.5 * (X - X.transpose()));
  return skew_from_coeffs(s.perp_basis * (s.perp_basis.transpose() * c), s.m());
}

void check_hyper_jet(const HyperTorsionJet& jet, double tol) {
  const int m = jet.s.m();
  if (static_cast<int>(jet.zeta.size()) != m) throw ContractViolation("hyper jet: need one zeta per direction");
  double skew = 0, par = 0;
  for (const Mat& z : jet.zeta) {
    if (z.rows() != m || z.cols() != m) throw ContractViolation("hyper jet: zeta must be 4n x 4n");
    const double sc = std::max(1.0, z.cwiseAbs().maxCoeff());
    skew = std::max(skew, (z + z.transpose()).cwiseAbs().maxCoeff() / sc);
    const Vec c = skew_coeffs(z);
    par = std::max(par, (jet.s.sp_basis.transpose() * c).norm() / std::max(1.0, c.norm()));
  }
  if (!(skew <= tol)) throw InvariantError("zeta skew-symmetry", skew);
  if (!(par <= tol)) throw InvariantError("zeta orthogonal to sp(n)", par);
}

HyperTorsionJet random_hyper_jet(const HyperStructure& s, Rng& rng) {
  HyperTorsionJet j{s, {}};
  for (int a = 0; a < s.m(); ++a) j.zeta.push_back(skew_from_coeffs(s.perp_basis * rng.normal_vec(s.perp_basis.cols()), s.m()));
  return j;
}

HyperTorsionJet lck_jet(const HyperStructure& s, const Vec& df) {
  const int m = s.m();
  if (df.size() != m) throw ContractViolation("lck_jet: df has wrong dimension");
  HyperTorsionJet j{s, {}};
  for (int a = 0; a < m; ++a) {
    const Vec x = Vec::Unit(m, a);
    j.zeta.push_back(project_sp_perp(s, df * x.transpose() - x * df.transpose()));
  }
  return j;
}

SUTorsionJet induced_jet(const HyperTorsionJet& jet, int a) {
  const HyperStructure& s = jet.s;
  const Mat& A = s.A[a];
  const int m = s.m();
  SUTorsionJet j{s.su[a], Vec::Zero(m), {}};
  Vec c(m);
  for (int x = 0; x < m; ++x) {
    const Mat& z = jet.zeta[x];
    c[x] = -(z * A).trace() / m;
    j.xi.push_back(0.5 * (z + A * z * A));
  }
  j.eta = -A * c;
  return j;
}

HyperDerived derive_hyper(const HyperTorsionJet& jet, double tol) {
  check_hyper_jet(jet, tol);
  const HyperStructure& s = jet.s;
  const int m = s.m();
  HyperDerived h;
  h.nabla_Omega = CoForm(m, 4);
  CoForm direct(m, 4);
  for (int a = 0; a < 3; ++a) {
    h.per[a] = derive(induced_jet(jet, a), tol);
    CoForm want(m, 2);
    for (int x = 0; x < m; ++x) want[x] = -derivation(jet.zeta[x], s.omega[a]);
    const double r = relative_residual(h.per[a].nabla_omega, want);
    if (!(r <= tol)) throw InvariantError("induced jet reproduces nabla omega_A", r);
    h.nabla_Omega += wedge(h.per[a].nabla_omega, s.omega[a]) * 2.0;
  }
  for (int x = 0; x < m; ++x) direct[x] = -derivation(jet.zeta[x], s.Omega);
  const double r = relative_residual(h.nabla_Omega, direct);
  if (!(r <= tol)) throw InvariantError("nabla Omega product rule", r);
  if (m > 4) h.d_Omega = alternate(h.nabla_Omega);
  return h;
}

std::pair<Form, Form> dpsi_from_domegas(const Form& dwb, const Form& dwc, const HyperStructure& s, int a) {
  const int n = s.n;
  const Form& b = s.omega[kCyc[a][0]];
  const Form& c = s.omega[kCyc[a][1]];
  Form re = dwb, im = dwc;
  for (int k = 0; k < n - 1; ++k) std::tie(re, im) = cmul(re, im, b, c);
  const double k = sign_tri(n) * factorial(n - 1);
  return {re / k, im / k};
}

HyperRecovery hyper_recover(const Form& dwi, const Form& dwj, const Form& dwk, const HyperStructure& s,
                            double tol) {
  const int m = s.m();
  const std::array<const Form*, 3> d = {&dwi, &dwj, &dwk};
  for (const Form* f : d)
    if (f->dim() != m || f->degree() != 3) throw ContractViolation("hyper_recover: expected three-forms on R^4n");
  HyperRecovery h;
  h.nabla_Omega = CoForm(m, 4);
  for (int a = 0; a < 3; ++a) {
    auto [dpp, dpm] = dpsi_from_domegas(*d[kCyc[a][0]], *d[kCyc[a][1]], s, a);
    h.reports[a] = TorsionEngine(s.su[a]).full_recover(*d[a], dpp, dpm, tol);
    h.nabla_omega[a] = h.reports[a].nabla_omega;
    h.nabla_Omega += wedge(h.nabla_omega[a], s.omega[a]) * 2.0;
  }
  // one zeta for all three structures
  const auto perp = s.perp_matrices();
  Mat M(3 * binomial(m, 2), perp.size());
  for (std::size_t k = 0; k < perp.size(); ++k)
    M.col(k) = coeffs_of({-derivation(perp[k], s.omega[0]), -derivation(perp[k], s.omega[1]),
                          -derivation(perp[k], s.omega[2])});
  const Eigen::ColPivHouseholderQR<Mat> qr(M);
  double res2 = 0, scale2 = 0;
  for (int x = 0; x < m; ++x) {
    const Vec rhs = coeffs_of({h.nabla_omega[0][x], h.nabla_omega[1][x], h.nabla_omega[2][x]});
    const Vec z = qr.solve(rhs);
    res2 += (M * z - rhs).squaredNorm();
    scale2 += rhs.squaredNorm();
    Mat zx = Mat::Zero(m, m);
    for (std::size_t k = 0; k < perp.size(); ++k) zx += z[k] * perp[k];
    h.zeta.push_back(zx);
  }
  const double res = scale2 > 1e-24 ? std::sqrt(res2 / scale2) : std::sqrt(res2);
  if (!(res <= tol)) throw InvariantError("common Sp(n) torsion", res);
  return h;
}

LckReport lee_and_lck(const std::array<DerivedDerivatives, 3>& d, const HyperStructure& s, double threshold) {
  const int n = s.n;
  LckReport r;
  r.classes_ok = true;
  double scale = 0;
  for (int a = 0; a < 3; ++a) {
    const Mat& A = s.A[a];
    const Vec ads = A * d[a].dstar_omega;
    r.theta[a] = -ads / (2.0 * n - 1);
    const TorsionReport rep =
        TorsionEngine(s.su[a]).full_recover(d[a].d_omega, d[a].d_psi_plus, d[a].d_psi_minus);
    r.eta[a] = rep.eta;
    r.classes[a] = classify(rep, threshold);
    if (r.classes[a] & ~(kW4 | kW5)) r.classes_ok = false;
    if (r.theta[a].norm() > 1e-12 && !(r.classes[a] & kW4)) r.classes_ok = false;
    scale = std::max(scale, r.theta[a].norm());
    r.invariant_residual = std::max(r.invariant_residual, (4.0 * n * (2 * n - 1) * rep.eta - ads).norm());
  }
  double worst_ratio_dev = -1;
  for (int a = 0; a < 3; ++a) {
    r.lee_spread = std::max(r.lee_spread, (r.theta[a] - r.theta[0]).norm());
    const Vec& th = r.theta[a];
    const double t2 = th.squaredNorm();
    const double res = (r.eta[a] + th / (2.0 * n)).norm();
    r.eta_residual = std::max(r.eta_residual, t2 > 1e-24 ? res / std::sqrt(t2) : res);
    const double ratio = t2 > 1e-24 ? r.eta[a].dot(th) / t2 : 0.0;
    const double dev = std::abs(ratio + 1.0 / (2.0 * n));
    if (dev > worst_ratio_dev) {
      worst_ratio_dev = dev;
      r.eta_theta_ratio = ratio;
    }
  }
  const double tol = 1e-10 * std::max(1.0, scale);
  r.pass = r.classes_ok && r.lee_spread <= tol && r.eta_residual <= 1e-10 && r.invariant_residual <= tol;
  return r;
}

KernelReport hyperkahler_kernel_check(int n) {
  const HyperStructure s = build_hyper(n);
  const int m = s.m();
  const auto perp = s.perp_matrices();
  KernelReport k;
  k.n = n;
  k.domain_dim = m * static_cast<int>(perp.size());
  Mat M(3 * binomial(m, 3), k.domain_dim);
  int c = 0;
  for (int x = 0; x < m; ++x)
    for (const Mat& P : perp) {
      std::vector<Form> dw;
      for (int a = 0; a < 3; ++a) dw.push_back(wedge(Form::basis(m, {x}), -derivation(P, s.omega[a])));
      M.col(c++) = coeffs_of(dw);
    }
  k.rank = numeric_rank(M);

  const SUStructure& su = s.su[0];
  const auto u = lambda_basis(2, su.unitary(), su.I);
  k.su_domain_dim = m * static_cast<int>(u.size());
  Mat S(binomial(m, 3), k.su_domain_dim);
  c = 0;
  for (int x = 0; x < m; ++x)
    for (const Form& f : u) S.col(c++) = coeffs_of({wedge(Form::basis(m, {x}), f)});
  k.su_rank = numeric_rank(S);
  k.pass = k.rank == k.domain_dim && k.domain_dim == 4 * n * 3 * n * (2 * n - 1) && k.su_rank < k.su_domain_dim;
  return k;
}

}  // namespace ht
