#include "ht/su_structure.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "ht/hermitian_ops.hpp"
#include "ht/rng.hpp"

namespace ht {

InvariantError::InvariantError(std::string name, double res)
    : std::runtime_error(name + " violated (residual " + std::to_string(res) + ")"),
      invariant(std::move(name)),
      residual(res) {}

int sign_tri(int k) { return ((k * (k + 1) / 2) % 2) ? -1 : 1; }

namespace {

double factorial(int k) {
  double r = 1;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

std::pair<Form, Form> complex_volume(const Mat& I, const std::vector<Vec>& e) {
  const int m = static_cast<int>(I.rows());
  Form re = Form::scalar(m, 1.0), im(m, 0);
  for (const Vec& v : e) {
    Form x = Form::one_form(v), y = Form::one_form(I * v);
    Form nre = wedge(re, x) - wedge(im, y);
    Form nim = wedge(re, y) + wedge(im, x);
    re = std::move(nre);
    im = std::move(nim);
  }
  return {re, im};
}

void push(std::vector<CheckResult>& out, std::string name, double r, double tol) {
  out.push_back({std::move(name), r, std::isfinite(r) && r < tol});
}

double psi_norm_defect(const Form& pp, const Form& pm, int n) {
  const double target = std::ldexp(1.0, n - 1);
  return std::max({std::abs(inner(pp, pp) - target), std::abs(inner(pm, pm) - target),
                   std::abs(inner(pp, pm))});
}

}  // namespace

SUStructure from_basis(const Mat& I, const std::vector<Vec>& e) {
  const int m = static_cast<int>(I.rows());
  const int n = static_cast<int>(e.size());
  if (2 * n != m) throw ContractViolation("from_basis: need n basis vectors for R^2n");
  SUStructure s;
  s.n = n;
  s.I = I;
  s.omega = kahler_form(I);
  std::tie(s.psi_plus, s.psi_minus) = complex_volume(I, e);
  s.basis = e;
  for (const Vec& v : e) s.basis.push_back(I * v);
  s.vol = Form::scalar(m, 1.0);
  for (const Vec& v : s.basis) s.vol = wedge(s.vol, Form::one_form(v));
  return s;
}

SUStructure standard_structure(int n) {
  if (n < 1 || n > 6) throw ContractViolation("standard_structure: n must be in 1..6");
  const int m = 2 * n;
  Mat I = Mat::Zero(m, m);
  for (int k = 0; k < n; ++k) {
    I(k + n, k) = 1.0;
    I(k, k + n) = -1.0;
  }
  std::vector<Vec> e;
  for (int k = 0; k < n; ++k) e.push_back(Vec::Unit(m, k));
  return from_basis(I, e);
}

std::vector<CheckResult> validate(const SUStructure& s, int samples, std::uint64_t seed, double tol) {
  std::vector<CheckResult> out;
  const int n = s.n, m = s.m();
  const Mat& I = s.I;
  const Mat id = Mat::Identity(m, m);
  push(out, "I^2 = -1", (I * I + id).cwiseAbs().maxCoeff(), tol);
  push(out, "I orthogonal", (I.transpose() * I - id).cwiseAbs().maxCoeff(), tol);
  push(out, "omega(x,y) = <x,Iy>", (s.omega - kahler_form(I)).max_abs(), tol);
  push(out, "<Psi,Psi>_C = 1", psi_norm_defect(s.psi_plus, s.psi_minus, n), tol);
  push(out, "I_(i) psi+ = psi-", (derivation(I, s.psi_plus) / n - s.psi_minus).max_abs(), tol);
  push(out, "I_(i) psi- = -psi+", (derivation(I, s.psi_minus) / n + s.psi_plus).max_abs(), tol);
  {
    LambdaProjector lp(I);
    push(out, "psi+ in [[lambda^{n,0}]]", (lp.project(s.psi_plus) - s.psi_plus).max_abs(), tol);
    push(out, "psi- in [[lambda^{n,0}]]", (lp.project(s.psi_minus) - s.psi_minus).max_abs(), tol);
  }
  const double vol_unit = std::abs(std::abs(s.vol.value()) - 1.0);
  push(out, "vol unit", vol_unit, tol);
  const double sg = sign_tri(n);
  push(out, "omega^n = (-1)^{n(n+1)/2} n! vol",
       (power(s.omega, n) - s.vol * (sg * factorial(n))).max_abs() / factorial(n), tol);
  if (vol_unit > 1e-6) return out;

  const double c = std::ldexp(1.0, n - 1);
  if (n >= 2) {
    push(out, "psi+ ^ omega = 0", wedge(s.psi_plus, s.omega).max_abs(), tol);
    push(out, "psi- ^ omega = 0", wedge(s.psi_minus, s.omega).max_abs(), tol);
  }
  const Form pp_pm = wedge(s.psi_plus, s.psi_minus);
  const Form pp_pp = wedge(s.psi_plus, s.psi_plus);
  const Form pm_pm = wedge(s.psi_minus, s.psi_minus);
  if (n % 2) {
    push(out, "psi+ ^ psi- = -(-1)^{n(n+1)/2} 2^{n-1} vol", (pp_pm + s.vol * (sg * c)).max_abs(), tol);
    push(out, "psi+ ^ psi+ = psi- ^ psi- = 0", std::max(pp_pp.max_abs(), pm_pm.max_abs()), tol);
  } else {
    push(out, "psi+ ^ psi+ = (-1)^{n(n+1)/2} 2^{n-1} vol",
         std::max((pp_pp - s.vol * (sg * c)).max_abs(), (pm_pm - s.vol * (sg * c)).max_abs()), tol);
    push(out, "psi+ ^ psi- = 0", pp_pm.max_abs(), tol);
  }
  if (n >= 2) {
    double r = 0;
    try {
      for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) {
          for (const Form* f : {&s.psi_plus, &s.psi_minus}) {
            Form t = slot_apply(SlotOp::single(j), slot_apply(SlotOp::single(i), *f, I), I);
            r = std::max(r, (t + *f).max_abs());
          }
        }
    } catch (const NotAlternating&) {
      r = INFINITY;
    }
    push(out, "I_(i) I_(j) psi = -psi", r, tol);
  }

  Rng rng(seed);
  double r5a = 0, r5b = 0, r5c = 0, rbi = 0, l2a = 0, l2b = 0;
  for (int k = 0; k < samples; ++k) {
    const Vec x = rng.normal_vec(m);
    const Vec y = rng.normal_vec(m);
    const Vec ix = I * x;
    const Form xp = wedge(Form::one_form(x), s.psi_plus);
    r5a = std::max(r5a, relative_residual(wedge(Form::one_form(ix), s.psi_minus), xp));
    r5b = std::max(r5b, relative_residual(-wedge(interior(ix, s.psi_plus), s.omega), xp));
    r5c = std::max(r5c, relative_residual(interior(ix, s.psi_minus), interior(x, s.psi_plus)));
    if (n >= 2) {
      rbi = std::max(rbi, relative_residual(interior_bivector(ix, y, s.psi_plus),
                                            -interior_bivector(x, y, s.psi_minus)));
      const Form mu = Form::one_form(x);
      const Vec imu = ix;
      const double q = std::ldexp(1.0, n - 2);
      auto st = [&](const Form& a, const Form& b) {
        return hodge(wedge(hodge(wedge(mu, a), s.vol), b), s.vol).to_vector();
      };
      l2a = std::max({l2a, relative_residual(st(s.psi_plus, s.psi_plus), Vec(-q * x)),
                      relative_residual(st(s.psi_minus, s.psi_minus), Vec(-q * x))});
      l2b = std::max({l2b, relative_residual(st(s.psi_minus, s.psi_plus), Vec(q * imu)),
                      relative_residual(st(s.psi_plus, s.psi_minus), Vec(-q * imu))});
    }
  }
  push(out, "x ^ psi+ = Ix ^ psi-", r5a, tol);
  push(out, "x ^ psi+ = -(Ix _| psi+) ^ omega", r5b, tol);
  push(out, "x _| psi+ = Ix _| psi-", r5c, tol);
  if (n >= 2) {
    push(out, "(Ix ^ y) _| psi+ = -(x ^ y) _| psi-", rbi, tol);
    push(out, "*(*(mu ^ psi) ^ psi) = -2^{n-2} mu", l2a, tol);
    push(out, "*(*(mu ^ psi-) ^ psi+) = 2^{n-2} I mu", l2b, tol);
  }
  return out;
}

bool all_pass(const std::vector<CheckResult>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

SUStructure adapt(const Mat& I, const Form& pp, const Form& pm, double tol) {
  const int m = static_cast<int>(I.rows());
  if (m % 2 || I.cols() != m) throw ContractViolation("adapt: I must be square of even size");
  if (pp.dim() != m || pm.dim() != m || pp.degree() != m / 2 || pm.degree() != m / 2)
    throw ContractViolation("adapt: psi must be n-forms on R^2n");
  const int n = m / 2;
  const Mat id = Mat::Identity(m, m);
  auto need = [&](const char* name, double r) {
    if (!(r <= tol)) throw InvariantError(name, r);
  };
  need("I^2 = -1", (I * I + id).cwiseAbs().maxCoeff());
  need("I orthogonal", (I.transpose() * I - id).cwiseAbs().maxCoeff());
  need("<Psi,Psi>_C = 1", psi_norm_defect(pp, pm, n));
  need("I_(i) psi+ = psi-", (derivation(I, pp) / n - pm).max_abs());

  std::vector<Vec> e = unitary_basis(I);
  std::vector<Vec> all = e;
  for (const Vec& v : e) all.push_back(I * v);
  // Psi(e_1..e_n): evaluate on the first n vectors
  std::vector<Vec> first(e.begin(), e.end());
  const std::complex<double> z(evaluate(pp, first), evaluate(pm, first));
  need("|Psi(e_1..e_n)| = 1", std::abs(std::abs(z) - 1.0));
  const double phi = -std::arg(z);
  e[0] = std::cos(phi) * e[0] + std::sin(phi) * (I * e[0]);
  SUStructure s = from_basis(I, e);
  need("psi reconstruction",
       std::max((s.psi_plus - pp).max_abs(), (s.psi_minus - pm).max_abs()));
  return s;
}

}  // namespace ht
