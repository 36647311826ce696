#pragma once

// Independent reference computations shared by the unit and acceptance tests.

#include <cmath>
#include <cstdint>
#include <vector>

#include "cuspmass/arith.hpp"
#include "cuspmass/eigenform.hpp"
#include "cuspmass/special.hpp"
#include "cuspmass/sym_square.hpp"

namespace cuspmass::oracle {

using i128 = __int128;

/// τ(n) for 1 ≤ n ≤ N from Δ = q ∏(1 - qⁿ)^24, written as (∏(1 - qⁿ)³)^8 with
/// Jacobi's sparse series ∏(1 - qⁿ)³ = Σ (-1)^j (2j+1) q^{j(j+1)/2}.
inline std::vector<i128> ramanujan_tau(std::int64_t N) {
  const std::size_t len = static_cast<std::size_t>(N);  // exponents 0..N-1 of the product
  std::vector<std::pair<std::size_t, int>> jacobi;
  for (std::int64_t j = 0; j * (j + 1) / 2 < N; ++j)
    jacobi.emplace_back(static_cast<std::size_t>(j * (j + 1) / 2),
                        static_cast<int>((j % 2 ? -1 : 1) * (2 * j + 1)));
  std::vector<i128> acc(len, 0);
  for (const auto& [e, c] : jacobi) acc[e] = c;
  for (int round = 1; round < 8; ++round) {
    std::vector<i128> next(len, 0);
    for (const auto& [e, c] : jacobi)
      for (std::size_t i = 0; i + e < len; ++i) next[i + e] += acc[i] * c;
    acc.swap(next);
  }
  std::vector<i128> tau(static_cast<std::size_t>(N) + 1, 0);
  for (std::size_t n = 1; n <= static_cast<std::size_t>(N); ++n) tau[n] = acc[n - 1];
  return tau;
}

inline double to_double(i128 v) { return static_cast<double>(static_cast<long double>(v)); }

struct DirichletCheck {
  double lhs = 0.0;          // Σ_{m,n ≤ M} A(m,n) m^{-s₁} n^{-s₂}
  double rhs = 0.0;          // L(sym² f, s₁) L(sym² f, s₂) / ζ(s₁ + s₂)
  double lhs_tail = 0.0;     // box truncation certificate
  double rhs_tail = 0.0;     // Euler-product truncation certificate
  double certificate() const { return lhs_tail + rhs_tail; }
};

/// Box sum of the symmetric-square coefficients against the Euler product of
/// L(s, sym² f) over the stored primes, at s₁ = 1 + 2β, s₂ = 1 + α + β.
///
/// The box tail uses A(m,n) = Σ_{d|(m,n)} μ(d) A(m/d,1) A(1,n/d), which turns the
/// box sum into Σ_d μ(d) d^{-s₁-s₂} S₁(M/d) S₂(M/d) with S_j(x) = Σ_{b ≤ x} A(b,1) b^{-s_j}.
/// Partial summation bounds |S_j(∞) - S_j(x)| by C x^{θ-s}(1 + s/(s-θ)) whenever
/// |Σ_{b ≤ u} A(b,1)| ≤ C u^θ for u ≥ x; C is measured on [x, prime limit] with
/// θ = 3/5. The Euler tail uses |log L_p| ≤ 3p^{-s}/(1 - p^{-s}) beyond the
/// largest stored prime.
inline DirichletCheck sym2_dirichlet(const std::shared_ptr<const eigen::HeckeEigenform>& f,
                                     double alpha, double beta, std::int64_t M) {
  const double s1 = 1 + 2 * beta, s2 = 1 + alpha + beta;
  DirichletCheck out;

  for (std::int64_t m = 1; m <= M; ++m)
    for (std::int64_t n = 1; n <= M; ++n)
      out.lhs += eigen::sym_square_A(*f, m, n) * std::pow(double(m), -s1) * std::pow(double(n), -s2);

  auto euler = [&](double s) {
    long double logL = 0;
    for (auto p : f->primes()) {
      const long double l = f->lambda_prime(p);
      const long double x = std::pow(static_cast<long double>(p), -static_cast<long double>(s));
      logL -= std::log((1 - x) * (1 - (l * l - 2) * x + x * x));
    }
    return std::exp(static_cast<double>(logL));
  };
  const double L1 = euler(s1), L2 = euler(s2);
  out.rhs = L1 * L2 / special::zeta(s1 + s2);
  const double P = static_cast<double>(f->primes().back());
  auto euler_tail = [&](double s) {
    // Σ_{n > P} 3 n^{-s}/(1 - P^{-s}) ≤ 3 P^{1-s}/((s-1)(1 - P^{-s})).
    return 3 * std::pow(P, 1 - s) / ((s - 1) * (1 - std::pow(P, -s)));
  };
  const double e1 = euler_tail(s1), e2 = euler_tail(s2);
  out.rhs_tail = std::abs(out.rhs) * (std::exp(e1 + e2) - 1);

  const std::int64_t X = f->prime_limit();
  eigen::SymSquareCoefficients A(f, X);
  const double theta = 0.6;
  std::vector<double> partial(static_cast<std::size_t>(X) + 2, 0.0);
  std::vector<double> S1(static_cast<std::size_t>(X) + 1, 0.0), S2 = S1;
  for (std::int64_t b = 1; b <= X; ++b) {
    const double a = A.first_row(b);
    partial[b] = partial[b - 1] + a;
    S1[b] = S1[b - 1] + a * std::pow(double(b), -s1);
    S2[b] = S2[b - 1] + a * std::pow(double(b), -s2);
  }
  // Suffix maxima of |partial(u)| u^{-θ}.
  std::vector<double> C(static_cast<std::size_t>(X) + 2, 0.0);
  for (std::int64_t u = X; u >= 1; --u)
    C[u] = std::max(C[u + 1], std::abs(partial[u]) * std::pow(double(u), -theta));
  auto tail = [&](std::int64_t x, double s) {
    x = std::max<std::int64_t>(x, 1);
    return C[x] * std::pow(double(x), theta - s) * (1 + s / (s - theta));
  };
  const double s = s1 + s2;
  for (std::int64_t d = 1; d <= M; ++d) {
    if (arith::moebius(d) == 0) continue;
    const std::int64_t x = M / d;
    const double t1 = tail(x, s1), t2 = tail(x, s2);
    out.lhs_tail += std::pow(double(d), -s) *
                    (t1 * std::abs(S2[x]) + t2 * std::abs(S1[x]) + t1 * t2);
  }
  out.lhs_tail += std::abs(S1[X] * S2[X]) * std::pow(double(M), 1 - s) / (s - 1);
  return out;
}

}  // namespace cuspmass::oracle
