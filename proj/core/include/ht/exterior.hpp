#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace ht {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Mask = std::uint32_t;

inline constexpr int kMaxDim = 12;

// Thrown on shape/degree misuse of the algebra.
struct ContractViolation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Sign of the permutation sorting the concatenation (A, B) of two disjoint
// index sets, i.e. parity of #{(a, b) : a in A, b in B, a > b}.
int merge_sign(Mask a, Mask b);

// Increasing multi-indices of size p in {0..m-1}, lexicographic order.
const std::vector<Mask>& layout(int m, int p);
// Position of a mask inside layout(m, popcount(mask)).
int rank_of(int m, Mask mask);
std::size_t binomial(int m, int p);

// Alternating p-form on R^m, dense coefficients over increasing multi-indices.
class Form {
 public:
  Form() = default;
  Form(int m, int p);

  static Form scalar(int m, double v);
  static Form one_form(const Vec& v);
  static Form volume(int m);
  // e^{i1} ^ ... ^ e^{ip}, indices need not be sorted (sign applied).
  static Form basis(int m, std::initializer_list<int> idx);
  static Form from_mask(int m, Mask mask, double v = 1.0);
  // 2-form with b(e_i, e_j) = M(i, j); M is antisymmetrized.
  static Form from_matrix(const Mat& M);

  int dim() const { return m_; }
  int degree() const { return p_; }
  std::size_t size() const { return c_.size(); }
  const std::vector<double>& coeffs() const { return c_; }
  std::vector<double>& coeffs() { return c_; }
  double operator[](std::size_t k) const { return c_[k]; }
  double& operator[](std::size_t k) { return c_[k]; }
  Mask mask(std::size_t k) const { return layout(m_, p_)[k]; }
  double at(Mask mask) const;
  void add(Mask mask, double v);

  Vec to_vector() const;  // degree 1 only
  Mat to_matrix() const;  // degree 2 only
  double value() const;   // degree 0 or m: the single coefficient

  double norm() const;
  double max_abs() const;
  bool is_zero(double tol = 0.0) const { return max_abs() <= tol; }

  Form& operator+=(const Form& o);
  Form& operator-=(const Form& o);
  Form& operator*=(double s);
  friend Form operator+(Form a, const Form& b) { return a += b; }
  friend Form operator-(Form a, const Form& b) { return a -= b; }
  friend Form operator*(Form a, double s) { return a *= s; }
  friend Form operator*(double s, Form a) { return a *= s; }
  friend Form operator/(Form a, double s) { return a *= 1.0 / s; }
  Form operator-() const { return *this * -1.0; }
  bool operator==(const Form& o) const = default;

 private:
  int m_ = 0;
  int p_ = 0;
  std::vector<double> c_;
};

// T*M tensor Lambda^p: one p-form per frame direction, component a = b(f_a, ...).
class CoForm {
 public:
  CoForm() = default;
  CoForm(int m, int p);
  explicit CoForm(std::vector<Form> comps);

  int dim() const { return m_; }
  int degree() const { return p_; }
  const Form& operator[](int a) const { return comp_[a]; }
  Form& operator[](int a) { return comp_[a]; }
  const std::vector<Form>& components() const { return comp_; }

  double norm() const;
  double max_abs() const;

  CoForm& operator+=(const CoForm& o);
  CoForm& operator-=(const CoForm& o);
  CoForm& operator*=(double s);
  friend CoForm operator+(CoForm a, const CoForm& b) { return a += b; }
  friend CoForm operator-(CoForm a, const CoForm& b) { return a -= b; }
  friend CoForm operator*(CoForm a, double s) { return a *= s; }
  friend CoForm operator*(double s, CoForm a) { return a *= s; }
  CoForm operator-() const { return *this * -1.0; }
  bool operator==(const CoForm& o) const = default;

 private:
  int m_ = 0;
  int p_ = 0;
  std::vector<Form> comp_;
};

Form wedge(const Form& a, const Form& b);
Form wedge(std::initializer_list<std::reference_wrapper<const Form>> fs);
Form power(const Form& a, int k);
Form interior(const Vec& x, const Form& a);
Form interior_bivector(const Vec& x, const Vec& y, const Form& a);
// Frame basis vector f_a interior product (fast path).
Form interior_basis(int a, const Form& b);
Form hodge(const Form& a, const Form& vol);
double inner(const Form& a, const Form& b);
double inner(const CoForm& a, const CoForm& b);

// Derivation extension of an endomorphism A: e^j -> -sum_c A(j, c) e^c, so
// (D_A b)(X_1..X_p) = -sum_i b(.., A X_i, ..).
Form derivation(const Mat& A, const Form& b);
// (E^* b)(X_1..X_p) = b(E X_1, .., E X_p).
Form pullback(const Mat& E, const Form& b);
double evaluate(const Form& a, std::span<const Vec> vecs);

// sum_a f_a ^ b_a
Form alternate(const CoForm& b);
// (-sum_a f_a _| b_a, sum_a (I f_a) _| b_a)
std::pair<Form, Form> codifferentials(const CoForm& b, const Mat& I);
// X -> X _| c
CoForm embed(const Form& c);
// X -> x(X) c for a one-form x
CoForm tensor(const Vec& x, const Form& c);
// componentwise wedge with a fixed form on the right
CoForm wedge(const CoForm& b, const Form& c);

double relative_residual(const Form& got, const Form& want);
double relative_residual(const CoForm& got, const CoForm& want);
double relative_residual(const Vec& got, const Vec& want);

}  // namespace ht
