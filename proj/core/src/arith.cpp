#include "cuspmass/arith.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace cuspmass::arith {

Factorization factorize(i64 n) {
  if (n < 1) throw std::invalid_argument("factorize: n must be positive");
  Factorization out;
  for (i64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

int moebius(i64 n) {
  int sign = 1;
  for (auto [p, e] : factorize(n)) {
    if (e > 1) return 0;
    sign = -sign;
  }
  return sign;
}

i64 divisor_count(i64 n) {
  i64 t = 1;
  for (auto [p, e] : factorize(n)) t *= (e + 1);
  return t;
}

i64 euler_phi(i64 n) {
  i64 r = n;
  for (auto [p, e] : factorize(n)) r = r / p * (p - 1);
  return r;
}

std::vector<i64> divisors(i64 n) {
  std::vector<i64> out{1};
  for (auto [p, e] : factorize(n)) {
    const std::size_t base = out.size();
    i64 pk = 1;
    for (int j = 1; j <= e; ++j) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

i64 mod_inverse(i64 a, i64 m) {
  if (m == 1) return 0;
  i64 r0 = mod(a, m), r1 = m, s0 = 1, s1 = 0;
  while (r1 != 0) {
    const i64 q = r0 / r1;
    std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
    std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
  }
  if (r0 != 1) throw std::invalid_argument("mod_inverse: not invertible");
  return mod(s0, m);
}

Sieve::Sieve(i64 limit) : limit_(std::max<i64>(limit, 1)) {
  const auto n = static_cast<std::size_t>(limit_);
  spf_.assign(n + 1, 0);
  mu_.assign(n + 1, 1);
  for (std::size_t i = 2; i <= n; ++i) {
    if (spf_[i] == 0) {
      spf_[i] = static_cast<i64>(i);
      primes_.push_back(static_cast<i64>(i));
    }
    for (i64 p : primes_) {
      const auto q = static_cast<std::size_t>(p);
      if (q > static_cast<std::size_t>(spf_[i]) || i * q > n) break;
      spf_[i * q] = p;
    }
  }
  for (std::size_t i = 2; i <= n; ++i) {
    const auto p = static_cast<std::size_t>(spf_[i]);
    const std::size_t r = i / p;
    mu_[i] = (r % p == 0) ? 0 : static_cast<signed char>(-mu_[r]);
  }
}

i64 Sieve::tau(i64 n) const {
  i64 t = 1;
  for (auto [p, e] : factorize(n)) t *= (e + 1);
  return t;
}

Factorization Sieve::factorize(i64 n) const {
  if (n > limit_) return arith::factorize(n);
  Factorization out;
  while (n > 1) {
    const i64 p = spf(n);
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  return out;
}

}  // namespace cuspmass::arith
