#include "cuspmass/sym_square.hpp"

#include <numeric>

#include "cuspmass/arith.hpp"
#include "cuspmass/error.hpp"

namespace cuspmass::eigen {

namespace {

// λ(p^j) for j = 0..jmax by the Hecke recursion.
std::vector<long double> prime_power_lambdas(long double lp, int jmax) {
  std::vector<long double> v(static_cast<std::size_t>(jmax + 1));
  v[0] = 1.0L;
  if (jmax >= 1) v[1] = lp;
  for (int j = 2; j <= jmax; ++j)
    v[static_cast<std::size_t>(j)] = lp * v[static_cast<std::size_t>(j - 1)] - v[static_cast<std::size_t>(j - 2)];
  return v;
}

// A(p^a, 1) = Σ_{b ≤ a/2} λ(p^{2(a−2b)})
long double local_first_row(long double lp, int a) {
  const auto pw = prime_power_lambdas(lp, 2 * a);
  long double s = 0.0L;
  for (int b = 0; 2 * b <= a; ++b) s += pw[static_cast<std::size_t>(2 * (a - 2 * b))];
  return s;
}

long double first_row_value(const HeckeEigenform& f, i64 n) {
  long double v = 1.0L;
  for (auto [p, a] : arith::factorize(n)) v *= local_first_row(f.lambda_prime(p), a);
  return v;
}

}  // namespace

std::vector<long double> lambda_of_squares(const HeckeEigenform& f, i64 nmax) {
  std::vector<long double> out(static_cast<std::size_t>(nmax + 1), 0.0L);
  if (nmax < 1) return out;
  out[1] = 1.0L;
  const arith::Sieve sieve(std::max<i64>(nmax, 2));
  for (i64 n = 2; n <= nmax; ++n) {
    const i64 p = sieve.spf(n);
    i64 m = n, pa = 1;
    int a = 0;
    while (m % p == 0) {
      m /= p;
      pa *= p;
      ++a;
    }
    if (m == 1) {
      out[static_cast<std::size_t>(n)] = prime_power_lambdas(f.lambda_prime(p), 2 * a).back();
    } else {
      out[static_cast<std::size_t>(n)] = out[static_cast<std::size_t>(pa)] * out[static_cast<std::size_t>(m)];
    }
  }
  return out;
}

double sym_square_A(const HeckeEigenform& f, i64 m, i64 n) {
  if (m < 1 || n < 1) throw DomainError("sym_square_A: indices must be positive");
  const i64 g = std::gcd(m, n);
  long double s = 0.0L;
  for (i64 d : arith::divisors(g)) {
    const int mu = arith::moebius(d);
    if (mu == 0) continue;
    s += mu * first_row_value(f, m / d) * first_row_value(f, n / d);
  }
  return static_cast<double>(s);
}

SymSquareCoefficients::SymSquareCoefficients(std::shared_ptr<const HeckeEigenform> parent,
                                             i64 row_limit)
    : parent_(std::move(parent)), row_limit_(row_limit) {
  row_.assign(static_cast<std::size_t>(row_limit_ + 1), 0.0);
  if (row_limit_ < 1) return;
  // multiplicative fill via smallest prime factors
  const arith::Sieve sieve(std::max<i64>(row_limit_, 2));
  std::vector<long double> tmp(row_.size(), 0.0L);
  tmp[1] = 1.0L;
  for (i64 n = 2; n <= row_limit_; ++n) {
    const i64 p = sieve.spf(n);
    i64 m = n, pa = 1;
    int a = 0;
    while (m % p == 0) {
      m /= p;
      pa *= p;
      ++a;
    }
    tmp[static_cast<std::size_t>(n)] =
        m == 1 ? local_first_row(parent_->lambda_prime(p), a)
               : tmp[static_cast<std::size_t>(pa)] * tmp[static_cast<std::size_t>(m)];
  }
  for (std::size_t i = 0; i < row_.size(); ++i) row_[i] = static_cast<double>(tmp[i]);
}

double SymSquareCoefficients::first_row(i64 n) const {
  if (n >= 1 && n <= row_limit_) return row_[static_cast<std::size_t>(n)];
  return static_cast<double>(first_row_value(*parent_, n));
}

double SymSquareCoefficients::A(i64 m, i64 n) const {
  if (m < 1 || n < 1) throw DomainError("A(m,n): indices must be positive");
  if (m == 1) return first_row(n);
  if (n == 1) return first_row(m);
  const auto key = std::minmax(m, n);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find({key.first, key.second});
    if (it != cache_.end()) return it->second;
  }
  const i64 g = std::gcd(m, n);
  double s = 0.0;
  for (i64 d : arith::divisors(g)) {
    const int mu = arith::moebius(d);
    if (mu == 0) continue;
    s += mu * first_row(key.first / d) * first_row(key.second / d);
  }
  std::lock_guard<std::mutex> lock(mu_);
  cache_[{key.first, key.second}] = s;
  return s;
}

}  // namespace cuspmass::eigen
