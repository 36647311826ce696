#include "cuspmass/qseries.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>

#include "cuspmass/error.hpp"

namespace cuspmass::eigen {

namespace {

using limb = std::uint64_t;

std::size_t max_bits(const std::vector<mpz_class>& v, std::int64_t N) {
  std::size_t b = 0;
  const auto n = std::min<std::size_t>(v.size(), static_cast<std::size_t>(N + 1));
  for (std::size_t i = 0; i < n; ++i)
    if (sgn(v[i]) != 0) b = std::max(b, mpz_sizeinbase(v[i].get_mpz_t(), 2));
  return b;
}

// Writes |x| into `slot` limbs starting at dst (little-endian limbs).
void put_slot(limb* dst, std::size_t slot, const mpz_class& x) {
  if (mpz_size(x.get_mpz_t()) > slot) throw std::logic_error("kronecker: slot overflow");
  std::size_t count = 0;
  mpz_export(dst, &count, -1, sizeof(limb), 0, 0, x.get_mpz_t());
}

// Packs Σ v_i 2^{64·slot·i} as a signed integer.
mpz_class pack(const std::vector<mpz_class>& v, std::int64_t N, std::size_t slot) {
  const auto n = std::min<std::size_t>(v.size(), static_cast<std::size_t>(N + 1));
  std::vector<limb> pos(n * slot, 0), neg(n * slot, 0);
  bool any_neg = false;
  for (std::size_t i = 0; i < n; ++i) {
    const int s = sgn(v[i]);
    if (s > 0) put_slot(&pos[i * slot], slot, v[i]);
    if (s < 0) {
      put_slot(&neg[i * slot], slot, v[i]);
      any_neg = true;
    }
  }
  mpz_class a, b;
  mpz_import(a.get_mpz_t(), pos.size(), -1, sizeof(limb), 0, 0, pos.data());
  if (!any_neg) return a;
  mpz_import(b.get_mpz_t(), neg.size(), -1, sizeof(limb), 0, 0, neg.data());
  return a - b;
}

}  // namespace

std::vector<mpz_class> series_multiply(const std::vector<mpz_class>& a,
                                       const std::vector<mpz_class>& b, std::int64_t N) {
  const std::size_t ba = max_bits(a, N), bb = max_bits(b, N);
  std::vector<mpz_class> out(static_cast<std::size_t>(N + 1));
  if (ba == 0 || bb == 0) return out;
  std::size_t bits = ba + bb + 2;
  for (std::int64_t t = N + 1; t > 0; t >>= 1) ++bits;
  const std::size_t slot = (bits + 63) / 64;

  mpz_class prod = pack(a, N, slot) * pack(b, N, slot);
  const bool negate = sgn(prod) < 0;
  if (negate) prod = -prod;

  const std::size_t total = static_cast<std::size_t>(N + 1) * slot;
  std::vector<limb> limbs(std::max(total, mpz_size(prod.get_mpz_t())) + slot, 0);
  std::size_t count = 0;
  mpz_export(limbs.data(), &count, -1, sizeof(limb), 0, 0, prod.get_mpz_t());

  mpz_class half, full;
  mpz_ui_pow_ui(full.get_mpz_t(), 2, 64 * slot);
  half = full / 2;
  int carry = 0;
  for (std::size_t i = 0; i <= static_cast<std::size_t>(N); ++i) {
    mpz_class v;
    mpz_import(v.get_mpz_t(), slot, -1, sizeof(limb), 0, 0, &limbs[i * slot]);
    v += carry;
    if (v >= half) {
      v -= full;
      carry = 1;
    } else {
      carry = 0;
    }
    out[i] = negate ? mpz_class(-v) : v;
  }
  return out;
}

mpq_class bernoulli(int n) {
  if (n < 0) throw std::invalid_argument("bernoulli: negative index");
  // Akiyama–Tanigawa
  std::vector<mpq_class> a(static_cast<std::size_t>(n + 1));
  for (int m = 0; m <= n; ++m) {
    a[static_cast<std::size_t>(m)] = mpq_class(1, m + 1);
    for (int j = m; j >= 1; --j) {
      a[static_cast<std::size_t>(j - 1)] =
          j * (a[static_cast<std::size_t>(j - 1)] - a[static_cast<std::size_t>(j)]);
      a[static_cast<std::size_t>(j - 1)].canonicalize();
    }
  }
  mpq_class b = a[0];
  if (n == 1) b = -b;  // B_1 = -1/2 convention
  return b;
}

QExpansion eisenstein_integral(int w, std::int64_t N) {
  QExpansion e;
  e.weight = w;
  e.coeffs.assign(static_cast<std::size_t>(N + 1), 0);
  if (w == 0) {
    e.coeffs[0] = 1;
    return e;
  }
  if (w < 4 || w % 2) throw InvalidWeightError("eisenstein: weight must be even and >= 4");
  mpq_class factor = mpq_class(-2 * w) / bernoulli(w);
  factor.canonicalize();
  const mpz_class num = factor.get_num(), den = factor.get_den();
  e.coeffs[0] = den;
  for (std::int64_t d = 1; d <= N; ++d) {
    mpz_class dp;
    mpz_ui_pow_ui(dp.get_mpz_t(), static_cast<unsigned long>(d), static_cast<unsigned long>(w - 1));
    for (std::int64_t m = d; m <= N; m += d) e.coeffs[static_cast<std::size_t>(m)] += dp;
  }
  for (std::int64_t n = 1; n <= N; ++n) e.coeffs[static_cast<std::size_t>(n)] *= num;
  return e;
}

QExpansion delta(std::int64_t N) {
  const QExpansion e4 = eisenstein_integral(4, N), e6 = eisenstein_integral(6, N);
  const auto e4sq = series_multiply(e4.coeffs, e4.coeffs, N);
  const auto e4cube = series_multiply(e4sq, e4.coeffs, N);
  const auto e6sq = series_multiply(e6.coeffs, e6.coeffs, N);
  QExpansion d;
  d.weight = 12;
  d.coeffs.resize(static_cast<std::size_t>(N + 1));
  for (std::size_t i = 0; i < d.coeffs.size(); ++i) {
    d.coeffs[i] = e4cube[i] - e6sq[i];
    mpz_divexact_ui(d.coeffs[i].get_mpz_t(), d.coeffs[i].get_mpz_t(), 1728);
  }
  return d;
}

int cusp_dimension(int k) {
  if (k < 12 || k % 2) return 0;
  return k / 12 - (k % 12 == 2 ? 1 : 0);
}

}  // namespace cuspmass::eigen
