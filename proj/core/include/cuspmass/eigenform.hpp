#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "cuspmass/qseries.hpp"

namespace cuspmass::eigen {

using i64 = std::int64_t;

/// Echelon (Miller) basis of S_k to q^N with exact integer coefficients.
std::vector<QExpansion> victor_miller_basis(int k, i64 N);

struct EigenOptions {
  /// Directory for `eigen_k{k}.tsv` files; empty disables the disk cache.
  std::string cache_dir;
  /// λ(n) read straight off the eigenform's q-expansion for n ≤ direct_limit
  /// (independent of the multiplicative extension; used for certification).
  i64 direct_limit = 2000;
  /// Smoothing scale for L(1, sym² f); capped by the prime range (N / 39).
  double sym2_X = 2000.0;
};

/// Cache directory taken from the CUSPMASS_CACHE environment variable (may be empty).
std::string default_cache_dir();

/// Normalized Hecke eigenform of level one: λ(1) = 1, |λ(p)| ≤ 2.
class HeckeEigenform {
 public:
  HeckeEigenform(int weight, int index, int dim, i64 N, std::vector<i64> primes,
                 std::vector<long double> lambda_p, std::vector<std::string> lambda_p_text);

  int weight() const { return weight_; }
  /// Position within B_k (forms ordered by increasing λ(2)).
  int index() const { return index_; }
  int dimension() const { return dim_; }
  /// Largest n for which every prime p ≤ n has a stored eigenvalue.
  i64 prime_limit() const { return N_; }

  /// λ(n); dense lookup for n ≤ prime_limit(), otherwise extension by
  /// multiplicativity (throws ExtendTableError for missing primes).
  double lambda(i64 n) const;
  long double lambda_ld(i64 n) const;
  /// λ(p) for a prime p ≤ prime_limit().
  long double lambda_prime(i64 p) const;
  /// 30-significant-digit decimal of λ(p).
  const std::string& lambda_prime_text(i64 p) const;
  const std::vector<i64>& primes() const { return primes_; }

  /// λ(n) computed from the q-expansion directly (n ≤ direct_limit); empty when
  /// the form was restored from the disk cache.
  const std::vector<long double>& direct_lambda() const { return direct_; }

  double sym2_L1() const { return sym2_L1_; }
  double sym2_L1_stability() const { return sym2_L1_stability_; }
  double sym2_X() const { return sym2_X_; }
  /// |a_f(1)|² = 2π²/(L(1, sym² f) Γ(k)).
  double a1_squared() const;
  double log_a1_squared() const;
  /// "rational" when λ(n) ∈ ℚ (dim S_k = 1), otherwise "numeric-30".
  std::string coefficient_field_tag() const { return dim_ == 1 ? "rational" : "numeric-30"; }

  // Construction helpers used by the builder.
  void set_direct(std::vector<long double> direct) { direct_ = std::move(direct); }
  void set_sym2(double L1, double stability, double X) {
    sym2_L1_ = L1;
    sym2_L1_stability_ = stability;
    sym2_X_ = X;
  }

 private:
  std::size_t prime_slot(i64 p) const;

  int weight_;
  int index_;
  int dim_;
  i64 N_;
  std::vector<i64> primes_;
  std::vector<long double> lambda_p_;
  std::vector<std::string> lambda_p_text_;
  std::vector<long double> dense_;  // λ(n), n ≤ N
  std::vector<long double> direct_;
  double sym2_L1_ = 0.0;
  double sym2_L1_stability_ = 0.0;
  double sym2_X_ = 0.0;
};

using EigenBasis = std::vector<std::shared_ptr<const HeckeEigenform>>;

/// B_k with prime eigenvalues for all p ≤ N. Results are memoized in-process and
/// persisted to options.cache_dir when set.
EigenBasis hecke_eigenbasis(int k, i64 N, const EigenOptions& options = {});

/// λ(n) via the Hecke recursion at prime powers and multiplicativity.
double lambda_extended(const HeckeEigenform& f, i64 n);

/// Characteristic polynomial of T_2 on S_k (monic, ascending coefficients).
std::vector<mpz_class> hecke_t2_charpoly(int k);

}  // namespace cuspmass::eigen
