#include "ht/hermitian_ops.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace ht {
namespace {

// Deterministic generic probe vectors for the alternation check.
Vec probe(int m, int r) {
  Vec v(m);
  for (int j = 0; j < m; ++j) v[j] = std::sin(1.37 + 0.91 * r + 2.03 * j + 0.17 * r * j);
  return v;
}

Form single_slot(const Form& b, int i, const Mat& I) {
  const int p = b.degree();
  if (i < 1 || i > p) throw std::out_of_range("slot index " + std::to_string(i) + " out of range");
  Form t = derivation(I, b) / static_cast<double>(p);
  const int m = b.dim();
  const double scale = std::max(1.0, b.norm());
  for (int trial = 0; trial < 2; ++trial) {
    std::vector<Vec> xs;
    for (int r = 0; r < p; ++r) xs.push_back(probe(m, 3 * trial + r));
    const double want = evaluate(t, xs);
    xs[i - 1] = I * xs[i - 1];
    const double got = -evaluate(b, xs);
    if (std::abs(got - want) > 1e-9 * scale)
      throw NotAlternating("I_(" + std::to_string(i) + ") image is not alternating");
  }
  return t;
}

CoForm map_components(const CoForm& b, auto&& f) {
  std::vector<Form> out;
  out.reserve(b.dim());
  for (int a = 0; a < b.dim(); ++a) out.push_back(f(b[a]));
  return CoForm(std::move(out));
}

}  // namespace

Form total_i(const Form& b, const Mat& I) {
  Form r = pullback(I, b);
  if (b.degree() % 2) r *= -1.0;
  return r;
}

Form l_op(const Form& b, const Mat& I) {
  return 0.5 * (derivation(I, derivation(I, b)) + b * static_cast<double>(b.degree()));
}

CoForm direction_i(const CoForm& b, const Mat& I) {
  const int m = b.dim();
  CoForm r(m, b.degree());
  for (int a = 0; a < m; ++a)
    for (int c = 0; c < m; ++c)
      if (I(c, a) != 0.0) r[a] -= b[c] * I(c, a);
  return r;
}

CoForm curly_l(const CoForm& b, const Mat& I) {
  return direction_i(map_components(b, [&](const Form& f) { return derivation(I, f); }), I);
}

Form slot_apply(const SlotOp& op, const Form& b, const Mat& I) {
  switch (op.kind) {
    case SlotKind::Single:
      return single_slot(b, op.slot, I);
    case SlotKind::Total:
      return total_i(b, I);
    case SlotKind::SumI:
      return derivation(I, b);
    case SlotKind::L:
      return l_op(b, I);
    case SlotKind::CurlyL:
      throw ContractViolation("CurlyL acts on CoForms");
  }
  return b;
}

CoForm slot_apply(const SlotOp& op, const CoForm& b, const Mat& I) {
  switch (op.kind) {
    case SlotKind::Single:
      if (op.slot < 1 || op.slot > b.degree() + 1)
        throw std::out_of_range("slot index " + std::to_string(op.slot) + " out of range");
      if (op.slot == 1) return direction_i(b, I);
      return map_components(b, [&](const Form& f) { return single_slot(f, op.slot - 1, I); });
    case SlotKind::Total:
      return direction_i(map_components(b, [&](const Form& f) { return total_i(f, I); }), I);
    case SlotKind::SumI:
      return direction_i(b, I) + map_components(b, [&](const Form& f) { return derivation(I, f); });
    case SlotKind::L:
      return curly_l(b, I) + map_components(b, [&](const Form& f) { return l_op(f, I); });
    case SlotKind::CurlyL:
      return curly_l(b, I);
  }
  return b;
}

std::vector<Vec> unitary_basis(const Mat& I) {
  const int m = static_cast<int>(I.rows());
  if (m % 2) throw ContractViolation("complex structure needs even dimension");
  std::vector<Vec> e;
  for (int k = 0; k < m && static_cast<int>(e.size()) < m / 2; ++k) {
    Vec v = Vec::Unit(m, k);
    for (int pass = 0; pass < 2; ++pass)
      for (const Vec& u : e) {
        Vec iu = I * u;
        v -= v.dot(u) * u + v.dot(iu) * iu;
      }
    const double nv = v.norm();
    if (nv > 1e-6) e.push_back(v / nv);
  }
  return e;
}

std::vector<Form> lambda_basis(int p, const std::vector<Vec>& ub, const Mat& I) {
  const int n = static_cast<int>(ub.size());
  const int m = static_cast<int>(I.rows());
  if (p == 0) return {Form::scalar(m, 1.0)};
  std::vector<Form> out;
  if (p > n) return out;
  for (Mask s : layout(n, p)) {
    Form re = Form::scalar(m, 1.0), im(m, 0);
    for (Mask kk = s; kk; kk &= kk - 1) {
      const int j = std::countr_zero(kk);
      Form x = Form::one_form(ub[j]);
      Form y = Form::one_form(I * ub[j]);
      Form nre = wedge(re, x) - wedge(im, y);
      Form nim = wedge(re, y) + wedge(im, x);
      re = std::move(nre);
      im = std::move(nim);
    }
    out.push_back(re);
    out.push_back(im);
  }
  return out;
}

LambdaProjector::LambdaProjector(const Mat& I) : LambdaProjector(I, unitary_basis(I)) {}

LambdaProjector::LambdaProjector(const Mat& I, std::vector<Vec> ubasis) : I_(I), ub_(std::move(ubasis)) {
  const int m = static_cast<int>(I.rows());
  for (int p = 0; p <= m; ++p) bases_.push_back(lambda_basis(p, ub_, I_));
}

const std::vector<Form>& LambdaProjector::basis(int p) const { return bases_.at(p); }

Form LambdaProjector::project(const Form& a) const {
  if (a.dim() != I_.rows()) throw ContractViolation("lambda_project: dimension mismatch");
  Form r(a.dim(), a.degree());
  for (const Form& b : bases_[a.degree()]) r += b * (inner(a, b) / inner(b, b));
  return r;
}

Form lambda_project(const Form& a, const Mat& I) {
  const auto ub = unitary_basis(I);
  Form r(a.dim(), a.degree());
  for (const Form& b : lambda_basis(a.degree(), ub, I)) r += b * (inner(a, b) / inner(b, b));
  return r;
}

std::tuple<double, Form, Form> two_form_split(const Form& a, const Mat& I, const Form& omega) {
  if (a.degree() != 2) throw ContractViolation("two_form_split needs a two-form");
  const double c = inner(a, omega) / inner(omega, omega);
  Form u = lambda_project(a, I);
  Form s = a - omega * c - u;
  return {c, s, u};
}

Form kahler_form(const Mat& A) { return Form::from_matrix(A); }

}  // namespace ht
