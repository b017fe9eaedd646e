#include <cmath>

#include "ht/hermitian_ops.hpp"
#include "ht/su_structure.hpp"
#include "support.hpp"

using namespace testing_support;
using ht::Rng;

namespace {

double fact(int k) { return k <= 1 ? 1.0 : k * fact(k - 1); }

// Random orthogonal matrix commuting with nothing in particular.
Mat random_rotation(int m, Rng& rng) {
  Eigen::HouseholderQR<Mat> qr(rng.normal_mat(m, m));
  return qr.householderQ();
}

}  // namespace

TEST(SUStructure, StandardStructuresValidate) {
  for (int n = 1; n <= 6; ++n) {
    const auto checks = ht::validate(ht::standard_structure(n), 5, 42);
    for (const auto& c : checks) EXPECT_TRUE(c.pass) << "n=" << n << " " << c.name << " " << c.residual;
  }
}

TEST(SUStructure, VolumeNormalisation) {
  // (-1)^{n(n+1)/2} n! Vol = omega^n
  for (int n = 1; n <= 5; ++n) {
    const auto s = ht::standard_structure(n);
    EXPECT_LT(diff(ht::power(s.omega, n), s.vol * (ht::sign_tri(n) * fact(n))), 1e-9);
  }
}

TEST(SUStructure, WedgeConstantsAgainstShuffleOracle) {
  for (int n = 1; n <= 3; ++n) {
    const auto s = ht::standard_structure(n);
    const double c = ht::sign_tri(n) * std::ldexp(1.0, n - 1);
    const Form pm = oracle::wedge(s.psi_plus, s.psi_minus);
    const Form pp = oracle::wedge(s.psi_plus, s.psi_plus);
    const Form mm = oracle::wedge(s.psi_minus, s.psi_minus);
    if (n % 2) {
      EXPECT_LT(diff(pm, -c * s.vol), 1e-12) << n;
      EXPECT_LT(pp.max_abs() + mm.max_abs(), 1e-12);
    } else {
      EXPECT_LT(diff(pp, c * s.vol), 1e-12);
      EXPECT_LT(diff(mm, c * s.vol), 1e-12);
      EXPECT_LT(pm.max_abs(), 1e-12);
    }
    if (n >= 2) EXPECT_LT(oracle::wedge(s.psi_plus, s.omega).max_abs(), 1e-12);
  }
}

TEST(SUStructure, ContractionIdentities) {
  Rng rng(40);
  for (int n = 2; n <= 4; ++n) {
    const auto s = ht::standard_structure(n);
    for (int t = 0; t < 5; ++t) {
      const Vec x = rng.normal_vec(s.m()), y = rng.normal_vec(s.m());
      const Vec ix = s.I * x;
      const Form xp = oracle::wedge(Form::one_form(x), s.psi_plus);
      EXPECT_LT(diff(xp, oracle::wedge(Form::one_form(ix), s.psi_minus)), 1e-10);
      EXPECT_LT(diff(xp, -oracle::wedge(oracle::interior(ix, s.psi_plus), s.omega)), 1e-10);
      EXPECT_LT(diff(oracle::interior(x, s.psi_plus), oracle::interior(ix, s.psi_minus)), 1e-10);
      EXPECT_LT(diff(oracle::interior(y, oracle::interior(ix, s.psi_plus)),
                     -oracle::interior(y, oracle::interior(x, s.psi_minus))),
                1e-10);
    }
  }
}

TEST(SUStructure, StarIdentities) {
  Rng rng(41);
  for (int n = 2; n <= 5; ++n) {
    const auto s = ht::standard_structure(n);
    const double o = s.vol.value(), q = std::ldexp(1.0, n - 2);
    const Vec mu = rng.normal_vec(s.m());
    const Form f = Form::one_form(mu);
    auto st = [&](const Form& a, const Form& b) {
      return oracle::hodge(ht::wedge(oracle::hodge(ht::wedge(f, a), o), b), o).to_vector();
    };
    EXPECT_LT(rel(st(s.psi_plus, s.psi_plus), Vec(-q * mu)), 1e-12);
    EXPECT_LT(rel(st(s.psi_minus, s.psi_minus), Vec(-q * mu)), 1e-12);
    EXPECT_LT(rel(st(s.psi_minus, s.psi_plus), Vec(q * s.I * mu)), 1e-12);
    EXPECT_LT(rel(st(s.psi_plus, s.psi_minus), Vec(-q * s.I * mu)), 1e-12);
  }
}

TEST(SUStructure, PairTwiceIsMinusOne) {
  for (int n = 2; n <= 4; ++n) {
    const auto s = ht::standard_structure(n);
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j) {
        const Form t = ht::slot_apply(ht::SlotOp::single(j), ht::slot_apply(ht::SlotOp::single(i), s.psi_plus, s.I), s.I);
        EXPECT_LT(diff(t, -s.psi_plus), 1e-12);
      }
  }
}

TEST(SUStructure, AdaptRecoversRotatedStructure) {
  Rng rng(43);
  for (int n : {2, 3, 4}) {
    const auto s = ht::standard_structure(n);
    const Mat P = random_rotation(s.m(), rng);
    const Mat I = P * s.I * P.transpose();
    // forms transported by P: beta'(v) = beta(P^T v)
    const Form pp = ht::pullback(P.transpose(), s.psi_plus), pm = ht::pullback(P.transpose(), s.psi_minus);
    const auto t = ht::adapt(I, pp, pm);
    EXPECT_LT(diff(t.psi_plus, pp), 1e-10);
    EXPECT_LT(diff(t.psi_minus, pm), 1e-10);
    for (const auto& c : ht::validate(t, 3, 1)) EXPECT_TRUE(c.pass) << c.name << " " << c.residual;
  }
}

TEST(SUStructure, AdaptHandlesPhase) {
  const auto s = ht::standard_structure(3);
  for (double phi : {0.3, 1.7, -2.9}) {
    const Form pp = std::cos(phi) * s.psi_plus - std::sin(phi) * s.psi_minus;
    const Form pm = std::sin(phi) * s.psi_plus + std::cos(phi) * s.psi_minus;
    const auto t = ht::adapt(s.I, pp, pm);
    EXPECT_LT(diff(t.psi_plus, pp) + diff(t.psi_minus, pm), 1e-10);
  }
}

TEST(SUStructure, AdaptRejectsBadInput) {
  const auto s = ht::standard_structure(2);
  Mat bad = s.I;
  bad(0, 0) = 0.1;
  try {
    ht::adapt(bad, s.psi_plus, s.psi_minus);
    FAIL() << "accepted a non-complex structure";
  } catch (const ht::InvariantError& e) {
    EXPECT_EQ(e.invariant, "I^2 = -1");
    EXPECT_GT(e.residual, 1e-3);
  }
  EXPECT_THROW(ht::adapt(s.I, s.psi_plus * 2.0, s.psi_minus), ht::InvariantError);
  const auto s3 = ht::standard_structure(3);
  EXPECT_THROW(ht::adapt(s3.I, s3.omega, s3.psi_minus), ht::ContractViolation);
  EXPECT_THROW(ht::standard_structure(7), ht::ContractViolation);
}

TEST(SUStructure, SignTri) {
  EXPECT_EQ(ht::sign_tri(1), -1);
  EXPECT_EQ(ht::sign_tri(2), -1);
  EXPECT_EQ(ht::sign_tri(3), 1);
  EXPECT_EQ(ht::sign_tri(4), 1);
  EXPECT_EQ(ht::sign_tri(5), -1);
}
