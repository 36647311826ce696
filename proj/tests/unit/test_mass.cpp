#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cuspmass/error.hpp"
#include "cuspmass/mass.hpp"
#include "cuspmass/special.hpp"
#include "test_support.hpp"

using namespace cuspmass;
using namespace cuspmass::mass;
using cuspmass::testing::basis;
using cuspmass::testing::rel_diff;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(FormEvaluator, CuspDecayAndPeriodicity) {
  const auto f = basis(12)[0];
  const FormEvaluator F(*f);
  double prev = std::abs(F(cplx(0.1, 2.0)));
  for (double y : {5.0, 10.0, 20.0, 40.0}) {
    const double v = std::abs(F(cplx(0.1, y)));
    EXPECT_LT(v, prev);
    prev = v;
  }
  EXPECT_LT(prev, 1e-90);
  for (cplx z : {cplx(0.3, 1.2), cplx(-0.45, 0.9), cplx(0.1, 3.5)}) {
    const cplx a = F(z), b = F(z + 1.0);
    EXPECT_LE(std::abs(a - b), 1e-12 * std::max(1.0, std::abs(a)));
  }
}

TEST(FormEvaluator, ModularInvariance) {
  for (int k : {12, 24}) {
    const auto f = basis(k).back();
    const FormEvaluator F(*f);
    const cplx z0(0.3, 1.2);
    EXPECT_LE(std::abs(std::abs(F(-1.0 / z0)) - std::abs(F(z0))), 1e-10);
    std::mt19937_64 rng(7 + k);
    std::uniform_real_distribution<double> ux(-0.5, 0.5), uy(0.4, 2.5);
    for (int i = 0; i < 20; ++i) {
      const cplx z(ux(rng), uy(rng));
      const double a = std::abs(F(z));
      EXPECT_LE(std::abs(std::abs(F(-1.0 / z)) - a), 1e-10) << z;
      EXPECT_LE(std::abs(std::abs(F(z + 1.0)) - a), 1e-10) << z;
    }
  }
}

TEST(FormEvaluator, InsufficientTermsReportRequirement) {
  const auto f = basis(12)[0];
  const FormEvaluator F(*f);
  const int need = F.required_terms(0.5);
  EXPECT_GT(need, 2);
  try {
    F(cplx(0.0, 0.5), 2);
    FAIL() << "expected TailBoundError";
  } catch (const TailBoundError& e) {
    EXPECT_EQ(e.required(), need);
  }
  EXPECT_EQ(F(cplx(0.2, 1.5)), evaluate_F(*f, cplx(0.2, 1.5)));
}

TEST(FundamentalDomain, AreaOfTruncatedDomain) {
  for (int k : {12, 26}) {
    const auto g = FundamentalDomainGrid::for_weight(k);
    EXPECT_NEAR(g.y_max, 2.0 * k / (4 * kPi) + 10 * std::sqrt(double(k)), 1e-12);
    const double area = domain_area(g);
    EXPECT_NEAR(3 / kPi * area, 1 - (3 / kPi) / g.y_max, 1e-13);
  }
  const auto coarse = FundamentalDomainGrid::for_weight(12);
  const auto fine = coarse.refined(2.0);
  EXPECT_GT(fine.nx, coarse.nx);
}

TEST(LpNorm, Weight12) {
  const auto f = basis(12)[0];
  const auto n2 = lp_norm(*f, 2.0);
  EXPECT_NEAR(n2.value, 1.0, 1e-3);
  EXPECT_NEAR(n2.value, 1.0, 1e-12);
  const auto n4 = lp_norm(*f, 4.0);
  EXPECT_GE(n4.value, 1.0);
  const auto l4 = l4_integral(*f);
  EXPECT_LE(rel_diff(std::pow(n4.value, 4), kPi / 3 * l4.value), 1e-12);
  EXPECT_NEAR(l4.value, 2.660459520589, 1e-9);
  EXPECT_LE(l4.est_error, 1e-8);
}

TEST(LpNorm, RefinementStable) {
  const auto f = basis(16)[0];
  const auto g = FundamentalDomainGrid::for_weight(16);
  const auto a = lp_norm(*f, 6.0, g), b = lp_norm(*f, 6.0, g.refined(1.7));
  EXPECT_LE(rel_diff(a.value, b.value), 1e-10);
}

TEST(CuspIntegral, TwoRoutesAgree) {
  for (int k : {12, 16}) {
    const auto f = basis(k)[0];
    for (double y0 : {0.9, 2.0, double(k)}) {
      const double q = cusp_integral_P(*f, y0), s = cusp_integral_P_sum(*f, y0);
      EXPECT_LE(rel_diff(q, s), 1e-6) << k << " " << y0;
    }
  }
}

TEST(CuspIntegral, Monotone) {
  const auto f = basis(12)[0];
  double prev = 1e300;
  for (double y0 = 0.87; y0 < 12; y0 *= 1.3) {
    const double v = cusp_integral_P(*f, y0);
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(CuspIntegral, MainTermFormula) {
  const auto f = basis(12)[0];
  const int k = 12;
  for (double y0 : {0.2, 0.5}) {
    const double lmax = k / (2 * kPi * y0);
    double s = 0.0;
    for (std::int64_t l = 2; l <= lmax; ++l) s += std::pow(shifted_S(*f, l), 2) / l;
    const double L = f->sym2_L1();
    const double pref = std::pow(kPi, 2.5) *
                        std::exp(std::lgamma(k - 0.5) - std::lgamma(double(k))) / (L * L);
    EXPECT_LE(rel_diff(cusp_integral_P_main(*f, y0), pref * s), 1e-13) << y0;
  }
  EXPECT_EQ(cusp_integral_P_main(*f, 10.0), 0.0);
}

TEST(Geodesic, RTwoRoutesAndMonotone) {
  for (int k : {12, 16}) {
    const auto f = basis(k)[0];
    for (double y0 : {0.9, 1.0, 2.0, 10.0})
      EXPECT_LE(rel_diff(geodesic_R(*f, y0), geodesic_R_sum(*f, y0)), 1e-6) << k << " " << y0;
  }
  const auto f = basis(12)[0];
  double prev = 1e300;
  for (double y0 : {0.5, 1.0, 1.5, 3.0, 6.0}) {
    const double r = geodesic_R(*f, y0);
    EXPECT_GT(r, 0.0);
    EXPECT_LE(r, prev);
    prev = r;
  }
}

TEST(Geodesic, ThreeMethods) {
  const auto f = basis(12)[0];
  const auto B24 = basis(24);
  const auto d = geodesic_I(*f, GeodesicMethod::Direct);
  const auto m = geodesic_I(*f, GeodesicMethod::Moment);
  const auto s = geodesic_I(*f, GeodesicMethod::Spectral, &B24);
  EXPECT_LE(rel_diff(d.value, m.value), 1e-3);
  EXPECT_LE(rel_diff(d.value, s.value), 1e-3);
  EXPECT_NEAR(d.value, 1.915153099929, 1e-9);
  EXPECT_GE(d.value, geodesic_R(*f, 1.0));
  EXPECT_THROW(geodesic_I(*f, GeodesicMethod::Spectral), PreconditionError);
}

TEST(Shifted, SmallCases) {
  for (int k : {12, 20}) {
    const auto f = basis(k)[0];
    EXPECT_DOUBLE_EQ(shifted_T(*f, 2), 1.0);
    EXPECT_DOUBLE_EQ(shifted_S(*f, 2), 1.0);
    const double t3 = 2 * f->lambda(2) * std::pow(2 * std::sqrt(2.0) / 3, k - 1);
    EXPECT_LE(rel_diff(shifted_T(*f, 3), t3), 1e-14);
  }
}

TEST(Shifted, TableAndApproximation) {
  const auto f = basis(36)[0];
  const auto t = ShiftedConvolutionTable::build(*f, 120);
  ASSERT_EQ(t.T.size(), 121u);
  EXPECT_EQ(t.T[1], 0.0);
  for (std::int64_t l : {2, 7, 50, 120}) {
    EXPECT_EQ(t.T[l], shifted_T(*f, l));
    EXPECT_EQ(t.S[l], shifted_S(*f, l));
  }
  // T ≈ S while l stays near √k.
  for (std::int64_t l = 2; l <= 6; ++l)
    EXPECT_LE(std::abs(t.T[l] - t.S[l]), 0.2 * std::max(1.0, std::abs(t.T[l]))) << l;
  const double c = t.tbound_constant(0.01), cp = t.approximation_constant(0.01);
  EXPECT_GT(c, 0.0);
  EXPECT_TRUE(std::isfinite(c));
  EXPECT_GT(cp, 0.0);
  EXPECT_TRUE(std::isfinite(cp));
}

TEST(Poincare, RoundTripAndSign) {
  const auto f = basis(12)[0];
  EXPECT_GT(poincare_inner(*f, 2), 0.0);
  for (std::int64_t l : {2, 3, 10, 57}) {
    const double T = shifted_T(*f, l);
    const double v = poincare_inner(*f, l);
    EXPECT_LE(rel_diff(poincare_to_T(*f, l, v), T), 1e-12) << l;
  }
}

TEST(InnerProducts, ParsevalOverB24) {
  const auto f = basis(12)[0];
  const auto B24 = basis(24);
  const auto ip = inner_products_F2_G(*f, B24);
  ASSERT_EQ(ip.size(), 2u);
  double s = 0.0;
  for (double v : ip) s += v * v;
  EXPECT_LE(rel_diff(s, l4_integral(*f).value), 1e-3);
}
