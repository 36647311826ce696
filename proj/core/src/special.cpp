#include "cuspmass/special.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "cuspmass/arith.hpp"
#include "cuspmass/error.hpp"

namespace cuspmass::special {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfLog2Pi = 0.91893853320467274178032973640562;
constexpr double kLogPi = 1.14472988584940017414342735135305;

// B_{2m} / (2m (2m - 1)), m = 1..10.
constexpr double kStirling[] = {
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
};

cplx stirling_series(cplx z) {
  const cplx zi = 1.0 / z, zi2 = zi * zi;
  cplx s = 0.0, p = zi;
  for (double c : kStirling) {
    s += c * p;
    p *= zi2;
  }
  return (z - 0.5) * std::log(z) - z + kHalfLog2Pi + s;
}

// sin(πz) with argument reduction on the real part.
cplx sinpi(cplx z) {
  const double x = z.real(), y = z.imag();
  const double r = x - 2.0 * std::floor(0.5 * x);  // [0, 2)
  double s = std::sin(kPi * r), c = std::cos(kPi * r);
  if (r == 1.0) s = 0.0;
  if (r == 0.5 || r == 1.5) c = 0.0;
  if (y == 0.0) return {s, 0.0};
  return {s * std::cosh(kPi * y), c * std::sinh(kPi * y)};
}

bool is_nonpositive_integer(cplx z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

}  // namespace

cplx log_gamma(cplx z) {
  if (is_nonpositive_integer(z))
    throw PoleError("log_gamma: pole at z = " + std::to_string(z.real()));
  if (z.real() < 0.5 && std::abs(z.imag()) >= 20.0) {
    // sin(πz) overflows here; recur upward instead (principal logs stay consistent off the axis)
    cplx shift = 0.0, w = z;
    while (w.real() < 0.5) {
      shift += std::log(w);
      w += 1.0;
    }
    return log_gamma(w) - shift;
  }
  if (z.real() < 0.5) {
    // Reflection with the branch correction that keeps the principal branch.
    const double sign = std::signbit(z.imag()) ? -1.0 : 1.0;
    const double tmp = sign * 2.0 * kPi * std::floor(0.5 * z.real() + 0.25);
    return cplx(kLogPi, tmp) - std::log(sinpi(z)) - log_gamma(1.0 - z);
  }
  if (std::abs(z) >= 15.0) return stirling_series(z);
  cplx shift = 0.0;
  cplx w = z;
  while (std::abs(w) < 15.0) {
    shift += std::log(w);
    w += 1.0;
  }
  return stirling_series(w) - shift;
}

double log_gamma(double x) {
  if (x <= 0.0) throw PoleError("log_gamma(real): argument must be positive");
  return std::lgamma(x);
}

double stirling_remainder(double a) {
  if (a >= 10.0) {
    const double ai = 1.0 / a, ai2 = ai * ai;
    double s = 0.0, p = ai;
    for (double c : kStirling) {
      s += c * p;
      p *= ai2;
    }
    return s;
  }
  return std::lgamma(a) - ((a - 0.5) * std::log(a) - a + kHalfLog2Pi);
}

// ---------------------------------------------------------------- Bessel J

namespace {

double bessel_series(int nu, double x) {
  const double h = 0.5 * x, h2 = h * h;
  double term = 1.0, sum = 1.0;
  for (int m = 1; m < 500; ++m) {
    term *= -h2 / (static_cast<double>(m) * (m + nu));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  const double logpre = nu * std::log(h) - std::lgamma(nu + 1.0);
  return sum * std::exp(logpre);
}

double bessel_miller(int nu, double x) {
  const double big = std::max<double>(nu, x);
  int top = static_cast<int>(big + 30.0 + 3.0 * std::cbrt(big) + std::sqrt(40.0 * big));
  if (top % 2) ++top;
  double jp1 = 0.0, j = 1e-300, norm = 0.0, result = 0.0;
  const double two_over_x = 2.0 / x;
  for (int m = top; m >= 1; --m) {
    const double jm1 = m * two_over_x * j - jp1;
    jp1 = j;
    j = jm1;
    if (m - 1 == nu) result = j;
    if ((m - 1) % 2 == 0 && m - 1 > 0) norm += 2.0 * j;
    if (std::abs(j) > 1e250) {
      j *= 1e-250;
      jp1 *= 1e-250;
      norm *= 1e-250;
      result *= 1e-250;
    }
  }
  norm += j;  // J_0 term
  return result / norm;
}

}  // namespace

double bessel_j(int nu, double x) {
  if (nu < 0) throw DomainError("bessel_j: order must be non-negative");
  if (x < 0.0) throw DomainError("bessel_j: argument must be non-negative");
  if (x == 0.0) return nu == 0 ? 1.0 : 0.0;
  const double h = 0.5 * x;
  if (x <= 2.0 || h * h <= nu + 1.0) return bessel_series(nu, x);
  return bessel_miller(nu, x);
}

// ---------------------------------------------------------------- incomplete Γ

namespace {

// log(e^{-x} x^a / Γ(a)) evaluated without cancellation for large a.
double log_gamma_prefactor(double a, double x) {
  if (a < 10.0) return a * std::log(x) - x - std::lgamma(a);
  const double t = (x - a) / a;
  double l1t;
  if (std::abs(t) < 0.1) {
    // log1p(t) - t by series
    double term = t * t, s = 0.0;
    for (int n = 2; n < 60; ++n) {
      const double add = (n % 2 ? 1.0 : -1.0) * term / n;
      s += add;
      if (std::abs(add) < 1e-18 * std::abs(s)) break;
      term *= t;
    }
    l1t = s;
  } else {
    l1t = std::log1p(t) - t;
  }
  return a * l1t + 0.5 * std::log(a / (2.0 * kPi)) - stirling_remainder(a);
}

// Σ x^n / ((a+1)...(a+n)), so that P = prefactor * series / a.
double lower_series(double a, double x) {
  double term = 1.0, sum = 1.0;
  for (int n = 1; n < 100000; ++n) {
    term *= x / (a + n);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

// Continued fraction for Γ(a,x) e^{x} x^{-a} (modified Lentz).
double upper_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h;
}

}  // namespace

double log_incomplete_gamma_Q(double a, double x) {
  if (a <= 0.0) throw DomainError("incomplete_gamma_Q: a must be positive");
  if (x < 0.0) throw DomainError("incomplete_gamma_Q: x must be non-negative");
  if (x == 0.0) return 0.0;
  const double lp = log_gamma_prefactor(a, x);
  if (x < a + 1.0) {
    const double p = std::exp(lp) * lower_series(a, x) / a;
    return std::log1p(-std::min(p, 1.0));
  }
  return lp + std::log(upper_cf(a, x));
}

double incomplete_gamma_Q(double a, double x) {
  if (a <= 0.0) throw DomainError("incomplete_gamma_Q: a must be positive");
  if (x < 0.0) throw DomainError("incomplete_gamma_Q: x must be non-negative");
  if (x == 0.0) return 1.0;
  const double lp = log_gamma_prefactor(a, x);
  if (x < a + 1.0) {
    const double p = std::exp(lp) * lower_series(a, x) / a;
    return std::clamp(1.0 - p, 0.0, 1.0);
  }
  return std::clamp(std::exp(lp) * upper_cf(a, x), 0.0, 1.0);
}

cplx upper_gamma_ratio(cplx a, double x) {
  if (a.real() <= 0.0) throw DomainError("upper_gamma_ratio: Re a must be positive");
  if (x <= 0.0) throw DomainError("upper_gamma_ratio: x must be positive");
  const double lg_re = std::lgamma(a.real());
  const cplx log_pre = a * std::log(x) - x - lg_re;  // log(x^a e^{-x} / Γ(Re a))
  if (x > std::abs(a) + 2.0) {
    const double tiny = 1e-300;
    cplx b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i < 100000; ++i) {
      const cplx an = -static_cast<double>(i) * (static_cast<double>(i) - a);
      b += 2.0;
      d = an * d + b;
      if (std::abs(d) < tiny) d = tiny;
      c = b + an / c;
      if (std::abs(c) < tiny) c = tiny;
      d = 1.0 / d;
      const cplx del = d * c;
      h *= del;
      if (std::abs(del - 1.0) < 1e-16) break;
    }
    return std::exp(log_pre) * h;
  }
  // γ(a,x) = x^a e^{-x} Σ x^n / (a (a+1) ... (a+n))
  cplx term = 1.0 / a, sum = term;
  for (int n = 1; n < 100000; ++n) {
    term *= x / (a + static_cast<double>(n));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  const cplx gamma_ratio = std::exp(log_gamma(a) - lg_re);
  return gamma_ratio - std::exp(log_pre) * sum;
}

double zeta(double s) {
  if (s <= 1.0) throw DomainError("zeta: s must exceed 1");
  return std::riemann_zeta(s);
}

// ---------------------------------------------------------------- exponential sums

cplx unit_root(i64 j, i64 c) {
  const i64 r = arith::mod(j, c);
  if (r == 0) return 1.0;
  if (2 * r == c) return -1.0;
  if (4 * r == c) return {0.0, 1.0};
  if (4 * r == 3 * c) return {0.0, -1.0};
  const double t = 2.0 * kPi * static_cast<double>(r) / static_cast<double>(c);
  return {std::cos(t), std::sin(t)};
}

cplx kloosterman_complex(i64 m, i64 n, i64 c) {
  if (c < 1) throw DomainError("kloosterman: modulus must be positive");
  if (c == 1) return 1.0;
  const i64 mr = arith::mod(m, c), nr = arith::mod(n, c);
  std::vector<cplx> terms;
  terms.reserve(static_cast<std::size_t>(c));
  for (i64 d = 1; d < c; ++d) {
    if (std::gcd(d, c) != 1) continue;
    const i64 dbar = arith::mod_inverse(d, c);
    terms.push_back(unit_root((mr * d + nr * dbar) % c, c));
  }
  cplx s = 0.0;
  for (const auto& t : terms) s += t;
  return s;
}

double kloosterman(const KloostermanQuery& q) {
  return kloosterman_complex(q.m, q.n, q.c).real();
}

i64 ramanujan_sum(i64 r, i64 c) {
  if (c < 1) throw DomainError("ramanujan_sum: modulus must be positive");
  const i64 g = std::gcd(r, c);
  i64 s = 0;
  for (i64 f : arith::divisors(g)) s += f * arith::moebius(c / f);
  return s;
}

}  // namespace cuspmass::special
