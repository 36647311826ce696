#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <vector>

namespace cuspmass::eigen {

/// Truncated q-expansion Σ_{n=0}^{length} coeffs[n] q^n with exact integer coefficients.
struct QExpansion {
  int weight = 0;
  std::vector<mpz_class> coeffs;  // coeffs[0] is the constant term

  std::int64_t length() const { return static_cast<std::int64_t>(coeffs.size()) - 1; }
  const mpz_class& operator[](std::int64_t n) const { return coeffs[static_cast<std::size_t>(n)]; }
};

/// Truncated product to q^N via Kronecker substitution.
std::vector<mpz_class> series_multiply(const std::vector<mpz_class>& a,
                                       const std::vector<mpz_class>& b, std::int64_t N);

/// Exact Bernoulli number B_n.
mpq_class bernoulli(int n);

/// Integer multiple of the normalized Eisenstein series E_w (w ≥ 4 even, or w = 0),
/// scaled by the smallest positive integer making all coefficients integral.
QExpansion eisenstein_integral(int w, std::int64_t N);

/// Δ = (E_4³ − E_6²)/1728 to q^N.
QExpansion delta(std::int64_t N);

/// Dimension of S_k for level one (0 for odd or small k).
int cusp_dimension(int k);

}  // namespace cuspmass::eigen
