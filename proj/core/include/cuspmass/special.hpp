#pragma once

#include <complex>
#include <cstdint>

namespace cuspmass::special {

using cplx = std::complex<double>;
using i64 = std::int64_t;

/// Principal branch of log Γ(z) (branch cut on the negative real axis,
/// continuous from above on the cut). Throws PoleError at z ∈ {0, -1, -2, ...}.
cplx log_gamma(cplx z);
/// Real log|Γ(x)| for x > 0.
double log_gamma(double x);

/// Stirling remainder μ(a) = log Γ(a) - (a - 1/2) log a + a - log(2π)/2, a > 0.
double stirling_remainder(double a);

/// Bessel J_ν(x) for integer ν ≥ 0 and x ≥ 0.
double bessel_j(int nu, double x);

/// Regularized upper incomplete gamma Q(a, x) = Γ(a, x)/Γ(a), a > 0, x ≥ 0.
double incomplete_gamma_Q(double a, double x);
/// Natural log of Q(a, x); usable far in the tail where Q underflows.
double log_incomplete_gamma_Q(double a, double x);

/// Γ(a, x)/Γ(Re a) for complex a with Re a > 0 and real x > 0.
cplx upper_gamma_ratio(cplx a, double x);

/// Riemann zeta on the real axis, s > 1.
double zeta(double s);

struct KloostermanQuery {
  i64 m = 0;
  i64 n = 0;
  i64 c = 1;
};

/// S(m, n, c) = Σ*_{d mod c} e((m d + n d̄)/c), by direct summation.
double kloosterman(const KloostermanQuery& q);
inline double kloosterman(i64 m, i64 n, i64 c) { return kloosterman({m, n, c}); }
/// Same sum returned with its imaginary part, for diagnostics.
cplx kloosterman_complex(i64 m, i64 n, i64 c);

/// Ramanujan sum r_c(r) = Σ_{f | (c, r)} f μ(c/f).
i64 ramanujan_sum(i64 r, i64 c);

/// e(j/c) = exp(2πi j/c) with exact integer reduction of j modulo c.
cplx unit_root(i64 j, i64 c);

}  // namespace cuspmass::special
