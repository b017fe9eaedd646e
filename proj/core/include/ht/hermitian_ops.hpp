#pragma once

#include <tuple>
#include <vector>

#include "ht/exterior.hpp"

namespace ht {

enum class SlotKind { Single, Total, SumI, L, CurlyL };

// One of the I-slot operators. For CoForms slot 1 is the covariant direction.
struct SlotOp {
  SlotKind kind = SlotKind::Total;
  int slot = 1;

  static SlotOp single(int i) { return {SlotKind::Single, i}; }
  static SlotOp total() { return {SlotKind::Total, 1}; }
  static SlotOp sum_i() { return {SlotKind::SumI, 1}; }
  static SlotOp l() { return {SlotKind::L, 1}; }
  static SlotOp curly_l() { return {SlotKind::CurlyL, 1}; }
};

// Thrown when a single-slot image of a form is not alternating, so it has no
// Form representative.
struct NotAlternating : std::domain_error {
  using std::domain_error::domain_error;
};

Form slot_apply(const SlotOp& op, const Form& b, const Mat& I);
CoForm slot_apply(const SlotOp& op, const CoForm& b, const Mat& I);

// Building blocks, exposed because the engine uses them directly.
Form total_i(const Form& b, const Mat& I);            // (-1)^p b(I., .., I.)
Form l_op(const Form& b, const Mat& I);               // sum_{i<j} I_(i) I_(j)
CoForm direction_i(const CoForm& b, const Mat& I);    // X -> -b_{IX}
CoForm curly_l(const CoForm& b, const Mat& I);        // I_(1)(I_(2)+...+I_(p+1))

// e_1..e_n with e_1..e_n, Ie_1..Ie_n orthonormal, by complex Gram-Schmidt
// over the frame vectors in order.
std::vector<Vec> unitary_basis(const Mat& I);

// Re and Im of e_{i1 C} ^ ... ^ e_{ip C} over increasing i1 < .. < ip, where
// e_{jC} = e_j + i I e_j. Mutually orthogonal, each of squared norm 2^(p-1).
std::vector<Form> lambda_basis(int p, const std::vector<Vec>& ubasis, const Mat& I);

// Orthogonal projector onto [[lambda^{p,0}]], cached per degree.
class LambdaProjector {
 public:
  explicit LambdaProjector(const Mat& I);
  LambdaProjector(const Mat& I, std::vector<Vec> ubasis);
  Form project(const Form& a) const;
  const std::vector<Form>& basis(int p) const;
  const Mat& I() const { return I_; }

 private:
  Mat I_;
  std::vector<Vec> ub_;
  std::vector<std::vector<Form>> bases_;
};

Form lambda_project(const Form& a, const Mat& I);

// a = c omega + s + u with s in su(n), u in [[lambda^{2,0}]].
std::tuple<double, Form, Form> two_form_split(const Form& a, const Mat& I, const Form& omega);

// omega_A(x, y) = <x, A y>
Form kahler_form(const Mat& A);

}  // namespace ht
