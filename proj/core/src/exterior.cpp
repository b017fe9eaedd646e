#include "ht/exterior.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>

namespace ht {
namespace {

struct Tables {
  // lay[m][p]: increasing multi-indices in lexicographic order
  std::array<std::array<std::vector<Mask>, kMaxDim + 1>, kMaxDim + 1> lay;
  std::array<std::vector<int>, kMaxDim + 1> rank;

  Tables() {
    for (int m = 0; m <= kMaxDim; ++m) {
      rank[m].assign(std::size_t{1} << m, -1);
      for (int p = 0; p <= m; ++p) {
        std::vector<int> idx(p);
        for (int i = 0; i < p; ++i) idx[i] = i;
        auto& out = lay[m][p];
        while (true) {
          Mask k = 0;
          for (int i : idx) k |= Mask{1} << i;
          rank[m][k] = static_cast<int>(out.size());
          out.push_back(k);
          int i = p - 1;
          while (i >= 0 && idx[i] == m - p + i) --i;
          if (i < 0) break;
          ++idx[i];
          for (int j = i + 1; j < p; ++j) idx[j] = idx[j - 1] + 1;
        }
      }
    }
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

void require(bool ok, const char* what) {
  if (!ok) throw ContractViolation(what);
}

void check_dim(int m) { require(m >= 0 && m <= kMaxDim, "dimension out of supported range"); }

inline int parity_below(Mask k, int j) { return std::popcount(k & ((Mask{1} << j) - 1)) & 1; }

}  // namespace

int merge_sign(Mask a, Mask b) {
  int s = 0;
  while (b) {
    int j = std::countr_zero(b);
    s += std::popcount(a >> (j + 1));
    b &= b - 1;
  }
  return (s & 1) ? -1 : 1;
}

const std::vector<Mask>& layout(int m, int p) {
  check_dim(m);
  require(p >= 0 && p <= m, "degree out of range");
  return tables().lay[m][p];
}

int rank_of(int m, Mask mask) { return tables().rank[m][mask]; }

std::size_t binomial(int m, int p) {
  if (p < 0 || p > m) return 0;
  std::size_t r = 1;
  for (int i = 1; i <= p; ++i) r = r * (m - p + i) / i;
  return r;
}

Form::Form(int m, int p) : m_(m), p_(p) {
  check_dim(m);
  require(p >= 0 && p <= m, "degree out of range");
  c_.assign(binomial(m, p), 0.0);
}

Form Form::scalar(int m, double v) {
  Form f(m, 0);
  f.c_[0] = v;
  return f;
}

Form Form::one_form(const Vec& v) {
  Form f(static_cast<int>(v.size()), 1);
  for (int j = 0; j < v.size(); ++j) f.c_[j] = v[j];
  return f;
}

Form Form::volume(int m) {
  Form f(m, m);
  f.c_[0] = 1.0;
  return f;
}

Form Form::basis(int m, std::initializer_list<int> idx) {
  Form r = scalar(m, 1.0);
  for (int i : idx) {
    require(i >= 0 && i < m, "basis index out of range");
    r = wedge(r, from_mask(m, Mask{1} << i));
  }
  return r;
}

Form Form::from_mask(int m, Mask mask, double v) {
  Form f(m, std::popcount(mask));
  require(mask < (Mask{1} << m), "mask out of range");
  f.c_[rank_of(m, mask)] = v;
  return f;
}

Form Form::from_matrix(const Mat& M) {
  require(M.rows() == M.cols(), "square matrix required");
  const int m = static_cast<int>(M.rows());
  Form f(m, 2);
  const auto& lay = layout(m, 2);
  for (std::size_t k = 0; k < lay.size(); ++k) {
    int i = std::countr_zero(lay[k]);
    int j = 31 - std::countl_zero(lay[k]);
    f.c_[k] = 0.5 * (M(i, j) - M(j, i));
  }
  return f;
}

double Form::at(Mask mask) const {
  require(std::popcount(mask) == p_, "mask degree mismatch");
  return c_[rank_of(m_, mask)];
}

void Form::add(Mask mask, double v) {
  require(std::popcount(mask) == p_, "mask degree mismatch");
  c_[rank_of(m_, mask)] += v;
}

Vec Form::to_vector() const {
  require(p_ == 1, "to_vector needs a one-form");
  Vec v(m_);
  for (int j = 0; j < m_; ++j) v[j] = c_[j];
  return v;
}

Mat Form::to_matrix() const {
  require(p_ == 2, "to_matrix needs a two-form");
  Mat M = Mat::Zero(m_, m_);
  const auto& lay = layout(m_, 2);
  for (std::size_t k = 0; k < lay.size(); ++k) {
    int i = std::countr_zero(lay[k]);
    int j = 31 - std::countl_zero(lay[k]);
    M(i, j) = c_[k];
    M(j, i) = -c_[k];
  }
  return M;
}

double Form::value() const {
  require(c_.size() == 1, "value needs a degree 0 or top-degree form");
  return c_[0];
}

double Form::norm() const {
  double s = 0;
  for (double v : c_) s += v * v;
  return std::sqrt(s);
}

double Form::max_abs() const {
  double s = 0;
  for (double v : c_) s = std::max(s, std::abs(v));
  return s;
}

Form& Form::operator+=(const Form& o) {
  require(m_ == o.m_ && p_ == o.p_, "form shape mismatch in +");
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
  return *this;
}

Form& Form::operator-=(const Form& o) {
  require(m_ == o.m_ && p_ == o.p_, "form shape mismatch in -");
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
  return *this;
}

Form& Form::operator*=(double s) {
  for (double& v : c_) v *= s;
  return *this;
}

CoForm::CoForm(int m, int p) : m_(m), p_(p), comp_(m, Form(m, p)) {}

CoForm::CoForm(std::vector<Form> comps) : comp_(std::move(comps)) {
  require(!comp_.empty(), "empty CoForm");
  m_ = comp_[0].dim();
  p_ = comp_[0].degree();
  require(static_cast<int>(comp_.size()) == m_, "CoForm needs one component per direction");
  for (const auto& c : comp_) require(c.dim() == m_ && c.degree() == p_, "CoForm components disagree");
}

double CoForm::norm() const { return std::sqrt(inner(*this, *this)); }

double CoForm::max_abs() const {
  double s = 0;
  for (const auto& c : comp_) s = std::max(s, c.max_abs());
  return s;
}

CoForm& CoForm::operator+=(const CoForm& o) {
  require(m_ == o.m_ && p_ == o.p_, "CoForm shape mismatch in +");
  for (int a = 0; a < m_; ++a) comp_[a] += o.comp_[a];
  return *this;
}

CoForm& CoForm::operator-=(const CoForm& o) {
  require(m_ == o.m_ && p_ == o.p_, "CoForm shape mismatch in -");
  for (int a = 0; a < m_; ++a) comp_[a] -= o.comp_[a];
  return *this;
}

CoForm& CoForm::operator*=(double s) {
  for (auto& c : comp_) c *= s;
  return *this;
}

Form wedge(const Form& a, const Form& b) {
  require(a.dim() == b.dim(), "wedge: dimension mismatch");
  require(a.degree() + b.degree() <= a.dim(), "wedge: degree exceeds dimension");
  const int m = a.dim();
  Form r(m, a.degree() + b.degree());
  const auto& la = layout(m, a.degree());
  const auto& lb = layout(m, b.degree());
  const auto& rk = tables().rank[m];
  for (std::size_t i = 0; i < la.size(); ++i) {
    const double va = a[i];
    if (va == 0.0) continue;
    for (std::size_t j = 0; j < lb.size(); ++j) {
      const double vb = b[j];
      if (vb == 0.0 || (la[i] & lb[j])) continue;
      r[rk[la[i] | lb[j]]] += merge_sign(la[i], lb[j]) * va * vb;
    }
  }
  return r;
}

Form wedge(std::initializer_list<std::reference_wrapper<const Form>> fs) {
  require(fs.size() > 0, "wedge of nothing");
  auto it = fs.begin();
  Form r = it->get();
  for (++it; it != fs.end(); ++it) r = wedge(r, it->get());
  return r;
}

Form power(const Form& a, int k) {
  require(k >= 0, "negative power");
  Form r = Form::scalar(a.dim(), 1.0);
  for (int i = 0; i < k; ++i) r = wedge(r, a);
  return r;
}

Form interior(const Vec& x, const Form& a) {
  require(a.degree() >= 1, "interior product of a 0-form");
  require(x.size() == a.dim(), "interior: dimension mismatch");
  const int m = a.dim();
  Form r(m, a.degree() - 1);
  const auto& la = layout(m, a.degree());
  const auto& rk = tables().rank[m];
  for (std::size_t i = 0; i < la.size(); ++i) {
    const double v = a[i];
    if (v == 0.0) continue;
    Mask k = la[i];
    for (Mask kk = k; kk; kk &= kk - 1) {
      int j = std::countr_zero(kk);
      if (x[j] == 0.0) continue;
      double s = parity_below(k, j) ? -1.0 : 1.0;
      r[rk[k ^ (Mask{1} << j)]] += s * x[j] * v;
    }
  }
  return r;
}

Form interior_basis(int a, const Form& b) {
  require(b.degree() >= 1, "interior product of a 0-form");
  const int m = b.dim();
  require(a >= 0 && a < m, "interior: direction out of range");
  Form r(m, b.degree() - 1);
  const auto& lr = layout(m, b.degree() - 1);
  const auto& rk = tables().rank[m];
  const Mask bit = Mask{1} << a;
  for (std::size_t i = 0; i < lr.size(); ++i) {
    if (lr[i] & bit) continue;
    Mask k = lr[i] | bit;
    r[i] = (parity_below(k, a) ? -1.0 : 1.0) * b[rk[k]];
  }
  return r;
}

Form interior_bivector(const Vec& x, const Vec& y, const Form& a) {
  require(a.degree() >= 2, "bivector contraction needs degree >= 2");
  return interior(y, interior(x, a));
}

Form hodge(const Form& a, const Form& vol) {
  const int m = a.dim();
  require(vol.dim() == m && vol.degree() == m, "hodge: volume must be a top-degree form");
  const double sigma = vol.value();
  require(std::abs(std::abs(sigma) - 1.0) < 1e-12, "hodge: volume form is not unit");
  Form r(m, m - a.degree());
  const Mask full = (m == 32) ? ~Mask{0} : ((Mask{1} << m) - 1);
  const auto& la = layout(m, a.degree());
  const auto& rk = tables().rank[m];
  for (std::size_t i = 0; i < la.size(); ++i) {
    if (a[i] == 0.0) continue;
    Mask kc = full ^ la[i];
    r[rk[kc]] += sigma * merge_sign(la[i], kc) * a[i];
  }
  return r;
}

double inner(const Form& a, const Form& b) {
  require(a.dim() == b.dim() && a.degree() == b.degree(), "inner: shape mismatch");
  double s = 0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double inner(const CoForm& a, const CoForm& b) {
  require(a.dim() == b.dim() && a.degree() == b.degree(), "inner: CoForm shape mismatch");
  double s = 0;
  for (int i = 0; i < a.dim(); ++i) s += inner(a[i], b[i]);
  return s;
}

Form derivation(const Mat& A, const Form& b) {
  const int m = b.dim();
  require(A.rows() == m && A.cols() == m, "derivation: matrix size mismatch");
  Form r(m, b.degree());
  const auto& lb = layout(m, b.degree());
  const auto& rk = tables().rank[m];
  for (std::size_t i = 0; i < lb.size(); ++i) {
    const double v = b[i];
    if (v == 0.0) continue;
    const Mask k = lb[i];
    for (Mask kk = k; kk; kk &= kk - 1) {
      const int j = std::countr_zero(kk);
      const Mask rest = k ^ (Mask{1} << j);
      for (int c = 0; c < m; ++c) {
        const double ajc = A(j, c);
        if (ajc == 0.0 || (rest >> c & 1)) continue;
        const int lo = std::min(j, c), hi = std::max(j, c);
        const Mask between = ((Mask{1} << hi) - 1) & ~((Mask{1} << (lo + 1)) - 1);
        const double s = (std::popcount(rest & between) & 1) ? -1.0 : 1.0;
        r[rk[rest | (Mask{1} << c)]] -= s * ajc * v;
      }
    }
  }
  return r;
}

Form pullback(const Mat& E, const Form& b) {
  const int m = b.dim();
  require(E.rows() == m && E.cols() == m, "pullback: matrix size mismatch");
  std::vector<Form> rows;
  rows.reserve(m);
  for (int j = 0; j < m; ++j) rows.push_back(Form::one_form(E.row(j).transpose()));
  Form r(m, b.degree());
  const auto& lb = layout(m, b.degree());
  for (std::size_t i = 0; i < lb.size(); ++i) {
    if (b[i] == 0.0) continue;
    Form t = Form::scalar(m, b[i]);
    for (Mask kk = lb[i]; kk; kk &= kk - 1) t = wedge(t, rows[std::countr_zero(kk)]);
    r += t;
  }
  return r;
}

double evaluate(const Form& a, std::span<const Vec> vecs) {
  const int p = a.degree();
  require(static_cast<int>(vecs.size()) == p, "evaluate: wrong number of vectors");
  if (p == 0) return a[0];
  const auto& la = layout(a.dim(), p);
  Mat M(p, p);
  double s = 0;
  for (std::size_t i = 0; i < la.size(); ++i) {
    if (a[i] == 0.0) continue;
    int r = 0;
    for (Mask kk = la[i]; kk; kk &= kk - 1, ++r) {
      int j = std::countr_zero(kk);
      for (int c = 0; c < p; ++c) M(r, c) = vecs[c][j];
    }
    s += a[i] * M.determinant();
  }
  return s;
}

Form alternate(const CoForm& b) {
  const int m = b.dim();
  require(b.degree() < m, "alternate: top-degree input");
  Form r(m, b.degree() + 1);
  const auto& lb = layout(m, b.degree());
  const auto& rk = tables().rank[m];
  for (int a = 0; a < m; ++a) {
    const Mask bit = Mask{1} << a;
    for (std::size_t i = 0; i < lb.size(); ++i) {
      const double v = b[a][i];
      if (v == 0.0 || (lb[i] & bit)) continue;
      r[rk[lb[i] | bit]] += (parity_below(lb[i], a) ? -1.0 : 1.0) * v;
    }
  }
  return r;
}

std::pair<Form, Form> codifferentials(const CoForm& b, const Mat& I) {
  const int m = b.dim();
  require(b.degree() >= 1, "codifferential of a function-valued CoForm");
  require(I.rows() == m && I.cols() == m, "codifferentials: matrix size mismatch");
  Form ds(m, b.degree() - 1), dso(m, b.degree() - 1);
  for (int a = 0; a < m; ++a) {
    ds -= interior_basis(a, b[a]);
    dso += interior(I.col(a), b[a]);
  }
  return {ds, dso};
}

CoForm embed(const Form& c) {
  std::vector<Form> comps;
  comps.reserve(c.dim());
  for (int a = 0; a < c.dim(); ++a) comps.push_back(interior_basis(a, c));
  return CoForm(std::move(comps));
}

CoForm tensor(const Vec& x, const Form& c) {
  require(x.size() == c.dim(), "tensor: dimension mismatch");
  std::vector<Form> comps;
  comps.reserve(c.dim());
  for (int a = 0; a < c.dim(); ++a) comps.push_back(c * x[a]);
  return CoForm(std::move(comps));
}

CoForm wedge(const CoForm& b, const Form& c) {
  std::vector<Form> comps;
  comps.reserve(b.dim());
  for (int a = 0; a < b.dim(); ++a) comps.push_back(wedge(b[a], c));
  return CoForm(std::move(comps));
}

namespace {
double rel(double diff, double scale) { return scale < 1e-12 ? diff : diff / scale; }
}  // namespace

double relative_residual(const Form& got, const Form& want) {
  return rel((got - want).norm(), std::max(got.norm(), want.norm()));
}

double relative_residual(const CoForm& got, const CoForm& want) {
  return rel((got - want).norm(), std::max(got.norm(), want.norm()));
}

double relative_residual(const Vec& got, const Vec& want) {
  require(got.size() == want.size(), "residual: size mismatch");
  return rel((got - want).norm(), std::max(got.norm(), want.norm()));
}

}  // namespace ht
