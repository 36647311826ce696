#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cuspmass/error.hpp"
#include "cuspmass/lvalues.hpp"
#include "cuspmass/special.hpp"
#include "cuspmass/sym_square.hpp"
#include "test_support.hpp"

using namespace cuspmass;
using cuspmass::testing::basis;
using cuspmass::testing::rel_diff;
using lvalues::CutoffW;
using lvalues::GammaFactorSpec;
using cplx = std::complex<double>;

TEST(GammaFactor, ShiftsByBranch) {
  EXPECT_EQ((GammaFactorSpec{12, 12}.shifts()), (std::vector<double>{22.5, 11.5, 0.5}));
  EXPECT_EQ((GammaFactorSpec{12, 16}.shifts()), (std::vector<double>{26.5, 15.5, 4.5}));
  EXPECT_EQ((GammaFactorSpec{12, 9}.shifts()), (std::vector<double>{19.5, 8.5, 2.5}));
  EXPECT_EQ((GammaFactorSpec{12, 9}.branch()), lvalues::Branch::KappaBelowK);
}

TEST(GammaFactor, CentralValueComposition) {
  const GammaFactorSpec spec{12, 12};
  const auto v = lvalues::gamma_factor(spec, cplx(0.5, 0.0));
  const double expect =
      -1.5 * std::log(2 * std::numbers::pi) + std::lgamma(23.0) + std::lgamma(12.0) + std::lgamma(1.0);
  EXPECT_NEAR(v.log_modulus, expect, 1e-12);
  EXPECT_NEAR(v.phase, 0.0, 1e-14);
  ASSERT_TRUE(v.representable);
  EXPECT_LE(rel_diff(v.value.real(), std::exp(expect)), 1e-12);
}

TEST(GammaFactor, RealAxisIsPositive) {
  const GammaFactorSpec spec{12, 14};
  for (double s : {0.1, 0.5, 2.0, 7.0}) {
    const auto v = lvalues::gamma_factor(spec, cplx(s, 0.0));
    EXPECT_GT(v.value.real(), 0.0);
    EXPECT_NEAR(v.value.imag(), 0.0, 1e-14 * v.value.real());
  }
}

TEST(GammaFactor, PoleThrows) {
  EXPECT_THROW(lvalues::gamma_factor(GammaFactorSpec{12, 12}, cplx(-0.5, 0.0)), PoleError);
}

TEST(RootNumber, CaseList) {
  EXPECT_EQ(lvalues::root_number(12, 12), 1);
  EXPECT_EQ(lvalues::root_number(12, 11), 1);
  EXPECT_EQ(lvalues::root_number(12, 13), -1);
  EXPECT_EQ(lvalues::root_number(12, 10), -1);
  EXPECT_EQ(lvalues::root_number(20, 24), 1);
}

TEST(CutoffW, SmallArgumentLimit) {
  const CutoffW W(GammaFactorSpec{12, 12}, 16);
  EXPECT_NEAR(W(1e-9), 1.0, 1e-6);
  EXPECT_NEAR(W(1e-5), 1.0, 1e-4);
  EXPECT_LT(W(1.0), 1.0);
}

TEST(CutoffW, DecayAcrossScale) {
  const CutoffW W(GammaFactorSpec{12, 12}, 16);
  const double k2 = 144.0;
  EXPECT_LE(std::abs(W(10 * k2) / W(k2)), 1e-3);
}

TEST(CutoffW, ContourShiftInvariance) {
  const CutoffW W(GammaFactorSpec{12, 12}, 16);
  for (double x : {0.5, 1.0, 3.0, 20.0, 144.0}) {
    const double a = W.value_on(x, 1.0), b = W.value_on(x, 2.0);
    EXPECT_NEAR(a, b, 1e-8) << x;
    EXPECT_NEAR(W(x), a, 1e-8) << x;
  }
  // Crossing the pole at s = 0 picks up the residue.
  EXPECT_NEAR(W.value_on(2.0, -0.5), W.value_on(2.0, 1.0), 1e-8);
}

TEST(CutoffW, EnvelopeAndDerivative) {
  // W(x) ≪ (1 + x/k²)^{-A}; the implied constant stays small for A = 16, and
  // differentiating in log x costs at most a factor A.
  for (const GammaFactorSpec spec : {GammaFactorSpec{12, 12}, GammaFactorSpec{16, 11}}) {
    const CutoffW W(spec, 16);
    const double k2 = spec.k * spec.k;
    for (double x = 0.05; x < 40 * k2; x *= 1.6) {
      const double env = std::pow(1 + x / k2, -16.0);
      EXPECT_LE(std::abs(W(x)), 10 * env + 1e-14) << x;
      const double h = 1e-4 * x;
      const double fd = x * (W(x + h) - W(x - h)) / (2 * h);
      EXPECT_NEAR(W.x_derivative(x), fd, 1e-6) << x;
      EXPECT_LE(std::abs(W.x_derivative(x)), 10 * 16 * env + 1e-13) << x;
    }
  }
}

TEST(CutoffW, IntegerTable) {
  const CutoffW W(GammaFactorSpec{12, 12}, 16);
  const auto& t = W.integer_table(50);
  ASSERT_GE(t.size(), 51u);
  for (int n : {1, 7, 50}) EXPECT_EQ(t[n], W(static_cast<double>(n)));
}

TEST(Sym2L1, TwoScaleStability) {
  const auto f = basis(12)[0];
  const auto a = lvalues::L_sym2_at_1(*f, 1000.0), b = lvalues::L_sym2_at_1(*f, 2000.0);
  EXPECT_GT(a.value, 0.0);
  EXPECT_NEAR(a.value, b.value, 1e-4);
  EXPECT_NEAR(b.value, 0.6317929457278832, 1e-12);
  EXPECT_LE(b.stability, 1e-10);
  for (int k : {16, 24, 36})
    for (const auto& g : basis(k)) EXPECT_GT(g->sym2_L1(), 0.0);
}

TEST(Sym2L1, DirichletSeriesNearOne) {
  // For s > 1 the Dirichlet series converges; its value should approach the
  // s = 1 value continuously.
  const auto f = basis(12)[0];
  const double at_1p = lvalues::L_sym2_dirichlet(*f, 1.0 + 1e-6, 80000);
  EXPECT_NEAR(at_1p, f->sym2_L1(), 2e-2);
  EXPECT_NEAR(lvalues::L_sym2_dirichlet(*f, 3.0, 10000), lvalues::L_sym2_dirichlet(*f, 3.0, 80000),
              1e-9);
}

TEST(LHalfG, OddSignForcesZero) {
  for (const auto& g : basis(26)) {
    const auto v = lvalues::L_half_g(*g);
    EXPECT_TRUE(v.forced_zero);
    EXPECT_EQ(v.value, 0.0);
  }
}

TEST(LHalfG, Weight24TruncationAndSign) {
  for (const auto& g : basis(24)) {
    const auto v = lvalues::L_half_g(*g);
    EXPECT_FALSE(v.forced_zero);
    EXPECT_GE(v.value, 0.0);
    const auto w = lvalues::L_half_g(*g, 2 * v.terms);
    EXPECT_NEAR(v.value, w.value, 1e-8);
  }
}

TEST(LHalfG, MatchesGammaWeightedMoment) {
  const auto f = basis(12)[0];
  const cplx m = lvalues::gamma_weighted_L(*f, 0.0);
  EXPECT_NEAR(m.real(), lvalues::L_half_g(*f).value, 1e-10);
  EXPECT_NEAR(m.imag(), 0.0, 1e-12);
}

class CentralValueTest : public ::testing::Test {
 protected:
  void SetUp() override {
    f_ = basis(12)[0];
    A_ = std::make_unique<eigen::SymSquareCoefficients>(f_, 80000);
  }
  std::shared_ptr<const eigen::HeckeEigenform> f_;
  std::unique_ptr<eigen::SymSquareCoefficients> A_;
};

TEST_F(CentralValueTest, OddRootNumberFlagged) {
  const CutoffW W(GammaFactorSpec{12, 13}, 16);
  for (const auto& g : basis(26)) {
    const auto v = lvalues::L_half_sym2f_g(*A_, *g, W);
    EXPECT_TRUE(v.forced_zero);
    EXPECT_EQ(v.value, 0.0);
  }
}

TEST_F(CentralValueTest, NonnegativeAndTruncationStable) {
  const CutoffW W(GammaFactorSpec{12, 12}, 16);
  const double expected[] = {0.9268393904110102, 0.5513527453795229};
  const auto B24 = basis(24);
  for (std::size_t i = 0; i < B24.size(); ++i) {
    const auto a = lvalues::L_half_sym2f_g(*A_, *B24[i], W, 20.0);
    const auto b = lvalues::L_half_sym2f_g(*A_, *B24[i], W, 40.0);
    const auto c = lvalues::L_half_sym2f_g(*A_, *B24[i], W, 20.0, lvalues::SumOrder::NOuter);
    EXPECT_GE(a.value, 0.0);
    EXPECT_LE(rel_diff(a.value, b.value), 1e-4);
    EXPECT_NEAR(a.value, c.value, 1e-12);
    EXPECT_NEAR(a.value, expected[i], 1e-12);
    EXPECT_GT(a.terms, 0);
  }
}

TEST_F(CentralValueTest, MeanValueSplit) {
  const CutoffW W(GammaFactorSpec{12, 12}, 16);
  const auto B24 = basis(24);
  const auto M = lvalues::mean_value_M(*A_, 1, B24, W);
  EXPECT_FALSE(M.forced_zero);
  EXPECT_GE(M.M, 0.0);
  EXPECT_NEAR(M.M, 0.459558626371, 1e-11);

  // Diagonal term summed here from its definition.
  double diag = 0.0;
  for (std::int64_t m = 1; m * m <= 20 * 144; ++m)
    diag += A_->A(m, 1) / static_cast<double>(m) * W(static_cast<double>(m * m));
  diag *= 2.0 / special::zeta(2.0);
  EXPECT_NEAR(M.M_diag, diag, 1e-10);
  EXPECT_NEAR(lvalues::mean_value_diag(*A_, 1, W), diag, 1e-10);
  EXPECT_NEAR(M.M_offdiag, M.M - M.M_diag, 1e-15);

  const auto off = lvalues::mean_value_offdiag_kloosterman(*A_, 1, W);
  EXPECT_LE(rel_diff(off.value, M.M_offdiag), 1e-3);
  EXPECT_GT(off.c_max, 0);
}

TEST_F(CentralValueTest, MeanValueOffDiagonalOtherShifts) {
  for (int kappa : {11, 14}) {
    const CutoffW W(GammaFactorSpec{12, kappa}, 16);
    const auto B = basis(2 * kappa);
    for (std::int64_t r : {2, 3}) {
      const auto M = lvalues::mean_value_M(*A_, r, B, W);
      const auto off = lvalues::mean_value_offdiag_kloosterman(*A_, r, W);
      EXPECT_NEAR(off.value, M.M_offdiag, 1e-3 * std::max(1.0, std::abs(M.M_offdiag)))
          << kappa << " " << r;
    }
  }
}

TEST_F(CentralValueTest, MeanValueForcedZero) {
  const CutoffW W(GammaFactorSpec{12, 13}, 16);
  const auto M = lvalues::mean_value_M(*A_, 1, basis(26), W);
  EXPECT_TRUE(M.forced_zero);
  EXPECT_EQ(M.M, 0.0);
}
