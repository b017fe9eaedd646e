#include <bit>
#include <cmath>

#include "support.hpp"

using namespace testing_support;
using ht::Rng;

TEST(Layout, BinomialCountsAndRanks) {
  for (int m = 1; m <= 8; ++m)
    for (int p = 0; p <= m; ++p) {
      const auto& L = ht::layout(m, p);
      ASSERT_EQ(L.size(), ht::binomial(m, p));
      for (std::size_t k = 0; k < L.size(); ++k) {
        EXPECT_EQ(std::popcount(L[k]), p);
        EXPECT_EQ(ht::rank_of(m, L[k]), static_cast<int>(k));
      }
    }
}

TEST(Form, BasisAppliesPermutationSign) {
  const Form a = Form::basis(4, {2, 0});
  const Form b = Form::basis(4, {0, 2});
  EXPECT_EQ(diff(a, -b), 0.0);
  EXPECT_EQ(Form::basis(4, {1, 1}).max_abs(), 0.0);
}

TEST(Form, EvaluateMatchesDeterminantOracle) {
  Rng rng(11);
  for (int m : {3, 5, 6})
    for (int p = 0; p <= m; ++p) {
      const Form a = random_form(m, p, rng);
      std::vector<Vec> v;
      for (int k = 0; k < p; ++k) v.push_back(rng.normal_vec(m));
      EXPECT_NEAR(ht::evaluate(a, v), oracle::eval(a, v), 1e-10 * std::max(1.0, a.norm()));
    }
}

TEST(Wedge, MatchesShuffleOracle) {
  Rng rng(12);
  for (int m : {4, 5, 6})
    for (int p = 0; p <= 3; ++p)
      for (int q = 0; p + q <= m && q <= 3; ++q) {
        const Form a = random_form(m, p, rng), b = random_form(m, q, rng);
        EXPECT_LT(diff(ht::wedge(a, b), oracle::wedge(a, b)), 1e-11) << m << " " << p << " " << q;
      }
}

TEST(Wedge, AssociativeAndGradedCommutative) {
  Rng rng(13);
  const int m = 7;
  for (int t = 0; t < 20; ++t) {
    const int p = t % 3 + 1, q = (t / 3) % 3 + 1, r = 1;
    const Form a = random_form(m, p, rng), b = random_form(m, q, rng), c = random_form(m, r, rng);
    EXPECT_LT(diff(ht::wedge(ht::wedge(a, b), c), ht::wedge(a, ht::wedge(b, c))), 1e-10);
    const double sg = (p * q) % 2 ? -1.0 : 1.0;
    EXPECT_LT(diff(ht::wedge(a, b), sg * ht::wedge(b, a)), 1e-10);
    EXPECT_LT(diff(ht::wedge({a, b, c}), ht::wedge(ht::wedge(a, b), c)), 1e-10);
  }
}

TEST(Wedge, PowerOfTwoFormMatchesRepeatedWedge) {
  Rng rng(14);
  const Form w = random_form(8, 2, rng);
  Form acc = Form::scalar(8, 1.0);
  for (int k = 0; k <= 4; ++k) {
    EXPECT_LT(diff(ht::power(w, k), acc), 1e-9 * std::max(1.0, acc.max_abs()));
    if (k < 4) acc = ht::wedge(acc, w);
  }
}

TEST(Interior, MatchesOracleAndIsAntiDerivation) {
  Rng rng(15);
  const int m = 6;
  for (int p = 1; p <= 4; ++p) {
    const Form a = random_form(m, p, rng), b = random_form(m, 2, rng);
    const Vec x = rng.normal_vec(m);
    EXPECT_LT(diff(ht::interior(x, a), oracle::interior(x, a)), 1e-11);
    // x _| (a ^ b) = (x _| a) ^ b + (-1)^p a ^ (x _| b)
    const Form lhs = ht::interior(x, ht::wedge(a, b));
    const Form rhs = ht::wedge(ht::interior(x, a), b) + (p % 2 ? -1.0 : 1.0) * ht::wedge(a, ht::interior(x, b));
    EXPECT_LT(diff(lhs, rhs), 1e-10);
    for (int i = 0; i < m; ++i)
      EXPECT_LT(diff(ht::interior_basis(i, a), ht::interior(Vec::Unit(m, i), a)), 1e-14);
  }
}

TEST(Interior, BivectorContraction) {
  Rng rng(16);
  const Form a = random_form(6, 4, rng);
  const Vec x = rng.normal_vec(6), y = rng.normal_vec(6);
  EXPECT_LT(diff(ht::interior_bivector(x, y, a), ht::interior(y, ht::interior(x, a))), 1e-11);
}

TEST(Hodge, MatchesLeviCivitaOracle) {
  Rng rng(17);
  for (int m : {2, 4, 5, 6})
    for (double o : {1.0, -1.0}) {
      const Form vol = Form::volume(m) * o;
      for (int p = 0; p <= m; ++p) {
        const Form a = random_form(m, p, rng);
        EXPECT_LT(diff(ht::hodge(a, vol), oracle::hodge(a, o)), 1e-12);
      }
    }
}

TEST(Hodge, DefiningPropertyAndInvolution) {
  Rng rng(18);
  for (int m : {4, 5, 6}) {
    const Form vol = Form::volume(m);
    for (int p = 0; p <= m; ++p) {
      const Form a = random_form(m, p, rng), b = random_form(m, p, rng);
      EXPECT_LT(diff(ht::wedge(a, ht::hodge(b, vol)), vol * oracle::inner(a, b)), 1e-9);
      const double sg = (p * (m - p)) % 2 ? -1.0 : 1.0;
      EXPECT_LT(diff(ht::hodge(ht::hodge(a, vol), vol), sg * a), 1e-12);
    }
  }
}

TEST(Hodge, RejectsNonUnitVolume) {
  EXPECT_THROW(ht::hodge(Form::scalar(4, 1.0), Form::volume(4) * 2.0), ht::ContractViolation);
}

TEST(Derivation, MatchesOracle) {
  Rng rng(19);
  const int m = 6;
  const Mat A = rng.normal_mat(m, m);
  for (int p = 0; p <= 4; ++p) {
    const Form b = random_form(m, p, rng);
    EXPECT_LT(diff(ht::derivation(A, b), oracle::derivation(A, b)), 1e-10);
    EXPECT_LT(diff(ht::pullback(A, b), oracle::pullback(A, b)), 1e-9);
  }
}

TEST(Derivation, IsDerivationOfWedge) {
  Rng rng(20);
  const int m = 6;
  const Mat A = rng.normal_mat(m, m);
  const Form a = random_form(m, 2, rng), b = random_form(m, 3, rng);
  EXPECT_LT(diff(ht::derivation(A, ht::wedge(a, b)),
                 ht::wedge(ht::derivation(A, a), b) + ht::wedge(a, ht::derivation(A, b))),
            1e-10);
}

TEST(CoForm, AlternateAndCodifferentialsMatchOracle) {
  Rng rng(21);
  const int m = 6;
  Mat I = Mat::Zero(m, m);
  for (int k = 0; k < 3; ++k) {
    I(k + 3, k) = 1;
    I(k, k + 3) = -1;
  }
  for (int p = 1; p <= 3; ++p) {
    const CoForm b = random_coform(m, p, rng);
    EXPECT_LT(diff(ht::alternate(b), oracle::alternate(b)), 1e-11);
    const auto [ds, dso] = ht::codifferentials(b, I);
    EXPECT_LT(diff(ds, oracle::dstar(b)), 1e-12);
    EXPECT_LT(diff(dso, oracle::dstar_omega(b, I)), 1e-12);
  }
}

TEST(CoForm, EmbedAlternatesToMultiple) {
  // sum_a f_a ^ (f_a _| c) = p c
  Rng rng(22);
  for (int p = 1; p <= 4; ++p) {
    const Form c = random_form(7, p, rng);
    EXPECT_LT(diff(ht::alternate(ht::embed(c)), c * p), 1e-11);
  }
}

TEST(CoForm, TensorAndShapeChecks) {
  Rng rng(23);
  const Vec x = rng.normal_vec(4);
  const Form c = random_form(4, 2, rng);
  const CoForm t = ht::tensor(x, c);
  for (int a = 0; a < 4; ++a) EXPECT_LT(diff(t[a], c * x[a]), 1e-15);
  EXPECT_THROW(CoForm(4, 2) + CoForm(4, 3), ht::ContractViolation);
  EXPECT_THROW(ht::wedge(Form(4, 2), Form(5, 1)), ht::ContractViolation);
}

TEST(Residual, RelativeScale) {
  const Form a = Form::basis(3, {0}) * 1e6;
  EXPECT_NEAR(ht::relative_residual(a * (1 + 1e-9), a), 1e-9, 1e-12);
  EXPECT_EQ(ht::relative_residual(Form(3, 1), Form(3, 1)), 0.0);
}
