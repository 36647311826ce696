#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace cuspmass::arith {

using i64 = std::int64_t;

/// Prime factorization as (p, exponent) pairs in increasing p.
using Factorization = std::vector<std::pair<i64, int>>;

Factorization factorize(i64 n);
int moebius(i64 n);
i64 divisor_count(i64 n);
i64 euler_phi(i64 n);
std::vector<i64> divisors(i64 n);  // sorted ascending
bool is_prime(i64 n);

/// Inverse of a modulo m (m ≥ 1, gcd(a, m) = 1); result in [0, m).
i64 mod_inverse(i64 a, i64 m);
/// Non-negative residue of a modulo m.
inline i64 mod(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

/// Smallest-prime-factor sieve with cached μ, τ and prime list.
class Sieve {
 public:
  explicit Sieve(i64 limit);

  i64 limit() const { return limit_; }
  const std::vector<i64>& primes() const { return primes_; }
  i64 spf(i64 n) const { return spf_[static_cast<std::size_t>(n)]; }
  int mu(i64 n) const { return mu_[static_cast<std::size_t>(n)]; }
  i64 tau(i64 n) const;
  Factorization factorize(i64 n) const;

 private:
  i64 limit_;
  std::vector<i64> spf_;
  std::vector<signed char> mu_;
  std::vector<i64> primes_;
};

}  // namespace cuspmass::arith
