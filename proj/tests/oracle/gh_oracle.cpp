#include "gh_oracle.hpp"

#include <map>
#include <memory>

namespace oracle {
namespace {

using ht::Mask;

Mat skew_of(const Form& f) {
  const int m = f.dim();
  Mat M = Mat::Zero(m, m);
  for (std::size_t k = 0; k < f.size(); ++k) {
    const Mask mk = f.mask(k);
    const int i = __builtin_ctz(mk), j = 31 - __builtin_clz(mk);
    M(i, j) = f[k];
    M(j, i) = -f[k];
  }
  return M;
}

Form form_of(const Mat& M) {
  const int m = static_cast<int>(M.rows());
  Form f(m, 2);
  for (std::size_t k = 0; k < f.size(); ++k) {
    const Mask mk = f.mask(k);
    f[k] = M(__builtin_ctz(mk), 31 - __builtin_clz(mk));
  }
  return f;
}

Mat linear_map(int dim, auto&& f) {
  Mat first = f(Vec::Unit(dim, 0));
  Mat A(first.rows(), dim);
  A.col(0) = first;
  for (int k = 1; k < dim; ++k) A.col(k) = f(Vec::Unit(dim, k));
  return A;
}

std::unique_ptr<GHSpaces> build(const ht::SUStructure& s) {
  auto g = std::make_unique<GHSpaces>();
  const int n = s.n, m = s.m();
  const Mat& I = s.I;
  g->n = n;
  const int f2 = static_cast<int>(ht::binomial(m, 2));
  const int N = m * f2;

  const auto L = lambda20(I);
  const int l = static_cast<int>(L.size());
  g->V = Mat::Zero(N, m * l);
  for (int a = 0; a < m; ++a)
    for (int k = 0; k < l; ++k) {
      CoForm c(m, 2);
      c[a] = L[k];
      g->V.col(a * l + k) = flatten(c);
    }

  // (t alpha)_X(Y, Z) = alpha_{IX}(IY, Z)
  const Mat T = linear_map(N, [&](const Vec& v) {
    const CoForm al = unflatten(v, m, 2);
    CoForm r(m, 2);
    for (int a = 0; a < m; ++a) {
      Mat acc = Mat::Zero(m, m);
      for (int c = 0; c < m; ++c)
        if (I(c, a) != 0.0) acc += I(c, a) * I.transpose() * skew_of(al[c]);
      r[a] = form_of(acc);
    }
    return Vec(flatten(r));
  });
  const Mat id = Mat::Identity(N, N);
  g->W12 = g->V * null_space((T + id) * g->V);
  g->W34 = g->V * null_space((T - id) * g->V);

  // total skew symmetry: alpha_x(y, z) + alpha_y(x, z) = 0
  const Mat S = linear_map(N, [&](const Vec& v) {
    const CoForm al = unflatten(v, m, 2);
    std::vector<Mat> A;
    for (int a = 0; a < m; ++a) A.push_back(skew_of(al[a]));
    Vec out(m * m * m);
    for (int x = 0; x < m; ++x)
      for (int y = 0; y < m; ++y)
        for (int z = 0; z < m; ++z) out[(x * m + y) * m + z] = A[x](y, z) + A[y](x, z);
    return out;
  });
  g->W1 = g->W12.cols() ? Mat(g->W12 * null_space(S * g->W12)) : g->W12;
  g->W2 = complement(g->W12, g->W1);

  // X -> X ^ theta and X -> IX ^ I theta
  Mat R(N, 2 * m);
  for (int j = 0; j < m; ++j) {
    const Vec th = Vec::Unit(m, j), ith = I * th;
    CoForm c1(m, 2), c2(m, 2);
    for (int a = 0; a < m; ++a) {
      const Vec x = Vec::Unit(m, a), ix = I * x;
      c1[a] = form_of(x * th.transpose() - th * x.transpose());
      c2[a] = form_of(ix * ith.transpose() - ith * ix.transpose());
    }
    R.col(2 * j) = flatten(c1);
    R.col(2 * j + 1) = flatten(c2);
  }
  g->W4 = intersect(g->W34, orth(R));
  g->W3 = complement(g->W34, g->W4);

  if (n == 3) {
    CoForm ep(m, 2), em(m, 2);
    for (int a = 0; a < m; ++a) {
      ep[a] = oracle::interior(Vec::Unit(m, a), s.psi_plus);
      em[a] = oracle::interior(Vec::Unit(m, a), s.psi_minus);
    }
    g->W1p = orth(flatten(ep));
    g->W1m = orth(flatten(em));
    // r(a)(x, y) = 1/2 <x _| psi+, a_y>
    std::vector<Form> px;
    for (int x = 0; x < m; ++x) px.push_back(oracle::interior(Vec::Unit(m, x), s.psi_plus));
    auto r_parts = [&](const Vec& v, int sign) {
      const CoForm al = unflatten(v, m, 2);
      Mat r(m, m);
      for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y) r(x, y) = 0.5 * oracle::inner(px[x], al[y]);
      const Mat part = r + sign * Mat(r.transpose());
      return Vec(Eigen::Map<const Vec>(part.data(), m * m));
    };
    const Mat skew = linear_map(static_cast<int>(g->W2.cols()), [&](const Vec& c) { return r_parts(g->W2 * c, -1); });
    const Mat sym = linear_map(static_cast<int>(g->W2.cols()), [&](const Vec& c) { return r_parts(g->W2 * c, 1); });
    g->W2p = g->W2 * null_space(skew);
    g->W2m = g->W2 * null_space(sym);
  }
  return g;
}

CoForm project(const Mat& Q, const Vec& v, int m) {
  if (Q.cols() == 0) return CoForm(m, 2);
  return unflatten(Q * (Q.transpose() * v), m, 2);
}

}  // namespace

Vec flatten(const CoForm& b) {
  const int m = b.dim();
  const int sz = static_cast<int>(ht::binomial(m, b.degree()));
  Vec v(m * sz);
  for (int a = 0; a < m; ++a)
    for (int k = 0; k < sz; ++k) v[a * sz + k] = b[a][k];
  return v;
}

CoForm unflatten(const Vec& v, int m, int p) {
  CoForm b(m, p);
  const int sz = static_cast<int>(ht::binomial(m, p));
  for (int a = 0; a < m; ++a)
    for (int k = 0; k < sz; ++k) b[a][k] = v[a * sz + k];
  return b;
}

Mat null_space(const Mat& A, double tol) {
  if (A.cols() == 0) return Mat(0, 0);
  if (A.rows() == 0) return Mat::Identity(A.cols(), A.cols());
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cut = tol * std::max(1.0, sv.size() ? sv[0] : 0.0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) rank += sv[i] > cut;
  return svd.matrixV().rightCols(A.cols() - rank);
}

Mat orth(const Mat& A, double tol) {
  if (A.cols() == 0) return A;
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) rank += sv[i] > tol * std::max(1.0, sv[0]);
  return svd.matrixU().leftCols(rank);
}

Mat complement(const Mat& big, const Mat& small) {
  if (small.cols() == 0) return orth(big);
  const Mat c = null_space(small.transpose() * big);
  return orth(big * c);
}

Mat intersect(const Mat& a, const Mat& b) {
  Mat ab(a.rows(), a.cols() + b.cols());
  ab << a, -b;
  const Mat c = null_space(ab);
  return orth(a * c.topRows(a.cols()));
}

const GHSpaces& gh_spaces(const ht::SUStructure& s) {
  static std::map<int, std::pair<Mat, std::unique_ptr<GHSpaces>>> cache;
  auto it = cache.find(s.n);
  if (it != cache.end() && it->second.first == s.I) return *it->second.second;
  auto g = build(s);
  auto& slot = cache[s.n];
  slot = {s.I, std::move(g)};
  return *slot.second;
}

GHParts gh_split(const ht::SUStructure& s, const CoForm& alpha) {
  const GHSpaces& g = gh_spaces(s);
  const int m = s.m();
  const Vec v = flatten(alpha);
  GHParts p;
  p.w1 = project(g.W1, v, m);
  p.w2 = project(g.W2, v, m);
  p.w3 = project(g.W3, v, m);
  p.w4 = project(g.W4, v, m);
  if (s.n == 3) {
    p.w1p = project(g.W1p, v, m);
    p.w1m = project(g.W1m, v, m);
    p.w2p = project(g.W2p, v, m);
    p.w2m = project(g.W2m, v, m);
  }
  return p;
}

CoForm random_in(const Mat& basis, int m, ht::Rng& rng) {
  if (basis.cols() == 0) return CoForm(m, 2);
  return unflatten(basis * rng.normal_vec(static_cast<int>(basis.cols())), m, 2);
}

std::vector<Form> lambda20(const Mat& I) {
  const int m = static_cast<int>(I.rows());
  const int f2 = static_cast<int>(ht::binomial(m, 2));
  const Mat C = linear_map(f2, [&](const Vec& v) {
    Form f(m, 2);
    for (int k = 0; k < f2; ++k) f[k] = v[k];
    const Mat B = skew_of(f);
    const Form g = form_of(B + I.transpose() * B * I);
    Vec out(f2);
    for (int k = 0; k < f2; ++k) out[k] = g[k];
    return out;
  });
  const Mat K = null_space(C);
  std::vector<Form> out;
  for (int c = 0; c < K.cols(); ++c) {
    Form f(m, 2);
    for (int k = 0; k < f2; ++k) f[k] = K(k, c);
    out.push_back(f);
  }
  return out;
}

CoForm xi_plus(const ht::SUStructure& s, const CoForm& b) {
  const int m = s.m();
  CoForm r(m, s.n);
  for (int a = 0; a < m; ++a)
    for (int i = 0; i < m; ++i)
      r[a] += 0.5 * ht::wedge(ht::interior_basis(i, b[a]), ht::interior_basis(i, s.psi_minus));
  return r;
}

CoForm xi_minus(const ht::SUStructure& s, const CoForm& b) {
  const int m = s.m();
  CoForm r(m, s.n);
  for (int a = 0; a < m; ++a)
    for (int i = 0; i < m; ++i)
      r[a] -= 0.5 * ht::wedge(ht::interior_basis(i, b[a]), ht::interior_basis(i, s.psi_plus));
  return r;
}

CoForm dir_i(const Mat& I, const CoForm& b) {
  const int m = b.dim();
  CoForm r(m, b.degree());
  for (int a = 0; a < m; ++a)
    for (int c = 0; c < m; ++c)
      if (I(c, a) != 0.0) r[a] -= b[c] * I(c, a);
  return r;
}

CoForm curly_l(const Mat& I, const CoForm& b) {
  CoForm d(b.dim(), b.degree());
  for (int a = 0; a < b.dim(); ++a) d[a] = ht::derivation(I, b[a]);
  return dir_i(I, d);
}

}  // namespace oracle
