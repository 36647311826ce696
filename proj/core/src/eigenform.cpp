#include "cuspmass/eigenform.hpp"

#include <Eigen/Dense>
#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "cuspmass/arith.hpp"
#include "cuspmass/error.hpp"
#include "cuspmass/lvalues.hpp"
#include "cuspmass/version.hpp"

namespace cuspmass::eigen {

namespace {

constexpr mp_bitcnt_t kPrec = 512;

mpf_class to_mpf(const mpz_class& z) {
  mpf_class f(0, kPrec);
  mpf_set_z(f.get_mpf_t(), z.get_mpz_t());
  return f;
}

std::string mpf_text(const mpf_class& x, int digits) {
  mp_exp_t exp = 0;
  std::string mant = x.get_str(exp, 10, static_cast<std::size_t>(digits));
  if (mant.empty() || mant == "0") return "0";
  bool neg = false;
  if (mant[0] == '-') {
    neg = true;
    mant.erase(0, 1);
  }
  while (mant.size() < static_cast<std::size_t>(digits)) mant.push_back('0');
  std::ostringstream os;
  if (neg) os << '-';
  os << mant[0] << '.' << mant.substr(1) << 'e' << (exp - 1);
  return os.str();
}

// Process-wide memo of Δ^i truncated at N.
std::vector<mpz_class> delta_power(int i, i64 N) {
  static std::mutex mu;
  static std::map<std::pair<int, i64>, std::vector<mpz_class>> memo;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = memo.find({i, N});
    if (it != memo.end()) return it->second;
  }
  std::vector<mpz_class> v;
  if (i == 1) {
    v = delta(N).coeffs;
  } else {
    v = series_multiply(delta_power(i - 1, N), delta_power(1, N), N);
  }
  std::lock_guard<std::mutex> lock(mu);
  memo[{i, N}] = v;
  return v;
}

void check_weight(int k) {
  if (k < 12 || k % 2 != 0 || cusp_dimension(k) == 0)
    throw InvalidWeightError("weight " + std::to_string(k) +
                             " has no level-one cusp forms (need even k >= 12, k != 14)");
}

// Integer matrix of T_2 on the echelon basis: M[i][j] = (T_2 b_i)[j].
std::vector<std::vector<mpz_class>> t2_matrix(const std::vector<QExpansion>& basis, int k) {
  const auto d = basis.size();
  mpz_class pk;
  mpz_ui_pow_ui(pk.get_mpz_t(), 2, static_cast<unsigned long>(k - 1));
  std::vector<std::vector<mpz_class>> M(d, std::vector<mpz_class>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 1; j <= d; ++j) {
      mpz_class v = basis[i][static_cast<i64>(2 * j)];
      if (j % 2 == 0) v += pk * basis[i][static_cast<i64>(j / 2)];
      M[i][j - 1] = v;
    }
  return M;
}

// Faddeev–LeVerrier; returns monic coefficients c_0..c_d (ascending).
std::vector<mpz_class> charpoly(const std::vector<std::vector<mpz_class>>& A) {
  const auto d = A.size();
  using Mat = std::vector<std::vector<mpq_class>>;
  Mat Aq(d, std::vector<mpq_class>(d)), Mk(d, std::vector<mpq_class>(d, 0));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) Aq[i][j] = A[i][j];
  std::vector<mpq_class> c(d + 1);
  c[d] = 1;
  for (std::size_t m = 1; m <= d; ++m) {
    Mat next(d, std::vector<mpq_class>(d, 0));
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        mpq_class s = 0;
        for (std::size_t l = 0; l < d; ++l) s += Aq[i][l] * Mk[l][j];
        if (i == j) s += c[d - m + 1];
        next[i][j] = s;
      }
    Mk = next;
    mpq_class tr = 0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t l = 0; l < d; ++l) tr += Aq[i][l] * Mk[l][i];
    c[d - m] = -tr / static_cast<long>(m);
    c[d - m].canonicalize();
  }
  std::vector<mpz_class> out(d + 1);
  for (std::size_t i = 0; i <= d; ++i) {
    if (c[i].get_den() != 1) throw SolverError("characteristic polynomial not integral", 0.0);
    out[i] = c[i].get_num();
  }
  return out;
}

mpf_class poly_eval(const std::vector<mpz_class>& c, const mpf_class& x, mpf_class* deriv) {
  mpf_class p(0, kPrec), dp(0, kPrec);
  for (std::size_t i = c.size(); i-- > 0;) {
    dp = dp * x + p;
    p = p * x + to_mpf(c[i]);
  }
  if (deriv) *deriv = dp;
  return p;
}

std::vector<mpf_class> real_roots(const std::vector<std::vector<mpz_class>>& M,
                                  const std::vector<mpz_class>& cp) {
  const auto d = M.size();
  Eigen::MatrixXd A(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = M[i][j].get_d();
  Eigen::EigenSolver<Eigen::MatrixXd> es(A, false);
  std::vector<double> guesses;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) guesses.push_back(es.eigenvalues()[i].real());
  std::sort(guesses.begin(), guesses.end());

  double scale = 0.0;
  for (double g : guesses) scale = std::max(scale, std::abs(g));
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < guesses.size(); ++i) gap = std::min(gap, guesses[i] - guesses[i - 1]);
  const double condition = d > 1 ? scale / std::max(gap, 1e-300) : 1.0;
  if (condition > 1e12)
    throw SolverError("near-degenerate T_2 spectrum; condition estimate " + std::to_string(condition),
                      condition);

  std::vector<mpf_class> roots;
  for (double g : guesses) {
    mpf_class x(g, kPrec), dp(0, kPrec);
    bool converged = false;
    for (int it = 0; it < 400; ++it) {
      const mpf_class p = poly_eval(cp, x, &dp);
      if (sgn(dp) == 0) break;
      const mpf_class dx = p / dp;
      x -= dx;
      mpf_class rel = abs(dx) / (abs(x) + 1);
      if (rel < mpf_class(1e-140, kPrec)) {
        converged = true;
        break;
      }
    }
    if (!converged) throw SolverError("Newton refinement of T_2 eigenvalue failed", condition);
    roots.push_back(x);
  }
  for (std::size_t i = 1; i < roots.size(); ++i)
    if (abs(roots[i] - roots[i - 1]) < mpf_class(1e-60, kPrec) * (abs(roots[i]) + 1))
      throw SolverError("Newton refinement merged distinct eigenvalues", condition);
  return roots;
}

// Solves (Mᵀ − λ I) c = 0 with c_1 = 1 by Gaussian elimination with pivoting.
std::vector<mpf_class> eigenvector(const std::vector<std::vector<mpz_class>>& M, const mpf_class& lam) {
  const auto d = M.size();
  std::vector<mpf_class> c(d, mpf_class(0, kPrec));
  c[0] = 1;
  if (d == 1) return c;
  // rows r = 0..d-1, unknowns c_1..c_{d-1}
  std::vector<std::vector<mpf_class>> A(d, std::vector<mpf_class>(d, mpf_class(0, kPrec)));
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t i = 1; i < d; ++i) {
      A[r][i - 1] = to_mpf(M[i][r]);
      if (i == r) A[r][i - 1] -= lam;
    }
    mpf_class rhs = to_mpf(M[0][r]);
    if (r == 0) rhs -= lam;
    A[r][d - 1] = -rhs;
  }
  std::vector<bool> used(d, false);
  std::vector<std::size_t> pivot_row(d - 1);
  for (std::size_t col = 0; col + 1 < d; ++col) {
    std::size_t best = d;
    mpf_class bestv(0, kPrec);
    for (std::size_t r = 0; r < d; ++r)
      if (!used[r] && abs(A[r][col]) > bestv) {
        bestv = abs(A[r][col]);
        best = r;
      }
    if (best == d) throw SolverError("singular eigenvector system", 0.0);
    used[best] = true;
    pivot_row[col] = best;
    for (std::size_t r = 0; r < d; ++r) {
      if (r == best || sgn(A[r][col]) == 0) continue;
      const mpf_class f = A[r][col] / A[best][col];
      for (std::size_t j = col; j < d; ++j) A[r][j] -= f * A[best][j];
    }
  }
  for (std::size_t col = 0; col + 1 < d; ++col)
    c[col + 1] = A[pivot_row[col]][d - 1] / A[pivot_row[col]][col];
  return c;
}

std::string cache_path(const std::string& dir, int k) {
  return (std::filesystem::path(dir) / ("eigen_k" + std::to_string(k) + ".tsv")).string();
}

std::string generator_tag() {
  return std::string("cuspmass-") + kVersion + "/cache-v" + std::to_string(kEigenCacheVersion);
}

struct PrimeTable {
  int dim = 0;
  i64 N = 0;
  std::vector<i64> primes;
  std::vector<std::vector<std::string>> text;  // [form][prime]
};

bool load_cache(const std::string& path, int k, i64 N, PrimeTable& out) {
  std::ifstream in(path);
  if (!in) return false;
  std::string line;
  int dim = -1, kk = -1;
  i64 nn = -1;
  std::string gen;
  std::vector<i64> primes;
  std::vector<std::vector<std::string>> text;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string key = line.substr(1, eq - 1);
      key.erase(0, key.find_first_not_of(' '));
      const std::string val = line.substr(eq + 1);
      if (key == "k") kk = std::stoi(val);
      if (key == "dim") dim = std::stoi(val);
      if (key == "N") nn = std::stoll(val);
      if (key == "generator") gen = val;
      continue;
    }
    if (dim <= 0 || kk != k || nn < N || gen != generator_tag()) return false;
    if (text.empty()) text.resize(static_cast<std::size_t>(dim));
    std::istringstream ls(line);
    i64 p = 0;
    ls >> p;
    if (p > N) break;
    primes.push_back(p);
    for (int f = 0; f < dim; ++f) {
      std::string v;
      ls >> v;
      if (v.empty()) return false;
      text[static_cast<std::size_t>(f)].push_back(v);
    }
  }
  if (dim <= 0 || kk != k || nn < N || gen != generator_tag()) return false;
  out.dim = dim;
  out.N = N;
  out.primes = std::move(primes);
  out.text = std::move(text);
  return true;
}

void save_cache(const std::string& path, int k, const PrimeTable& t) {
  std::filesystem::create_directories(std::filesystem::path(path).parent_path());
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    out << "# cuspmass eigen cache\n# k=" << k << "\n# dim=" << t.dim << "\n# N=" << t.N
        << "\n# generator=" << generator_tag() << "\n# columns=p";
    for (int f = 0; f < t.dim; ++f) out << "\tlambda_" << (f + 1);
    out << '\n';
    for (std::size_t i = 0; i < t.primes.size(); ++i) {
      out << t.primes[i];
      for (int f = 0; f < t.dim; ++f) out << '\t' << t.text[static_cast<std::size_t>(f)][i];
      out << '\n';
    }
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

std::string default_cache_dir() {
  const char* env = std::getenv("CUSPMASS_CACHE");
  return env ? std::string(env) : std::string();
}

std::vector<QExpansion> victor_miller_basis(int k, i64 N) {
  check_weight(k);
  const int d = cusp_dimension(k);
  if (N < d)
    throw InsufficientPrecisionError("victor_miller_basis: N = " + std::to_string(N) +
                                     " is below dim S_k = " + std::to_string(d));
  const i64 L = std::max<i64>(N, 2 * d);
  std::vector<std::vector<mpz_class>> rows;
  for (int i = 1; i <= d; ++i) {
    const QExpansion e = eisenstein_integral(k - 12 * i, L);
    rows.push_back(series_multiply(delta_power(i, L), e.coeffs, L));
  }
  // Integer back-substitution to echelon form; row i ends as lead_i · (Miller row i).
  for (int i = d - 1; i >= 0; --i) {
    auto& ri = rows[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < d; ++j) {
      const auto& rj = rows[static_cast<std::size_t>(j)];
      const mpz_class a = rj[static_cast<std::size_t>(j + 1)];
      const mpz_class b = ri[static_cast<std::size_t>(j + 1)];
      if (sgn(b) == 0) continue;
      for (std::size_t n = 0; n < ri.size(); ++n) ri[n] = a * ri[n] - b * rj[n];
    }
    const mpz_class lead = ri[static_cast<std::size_t>(i + 1)];
    mpz_class g = 0;
    for (const auto& v : ri) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    if (lead % g != 0 || sgn(lead) == 0) throw SolverError("echelon reduction failed", 0.0);
    for (auto& v : ri) {
      if (!mpz_divisible_p(v.get_mpz_t(), lead.get_mpz_t()))
        throw SolverError("echelon basis is not integral", 0.0);
      mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), lead.get_mpz_t());
    }
  }
  std::vector<QExpansion> out;
  for (auto& r : rows) {
    QExpansion q;
    q.weight = k;
    r.resize(static_cast<std::size_t>(N + 1));
    q.coeffs = std::move(r);
    out.push_back(std::move(q));
  }
  return out;
}

std::vector<mpz_class> hecke_t2_charpoly(int k) {
  check_weight(k);
  const int d = cusp_dimension(k);
  const auto basis = victor_miller_basis(k, 2 * d + 2);
  return charpoly(t2_matrix(basis, k));
}

// ---------------------------------------------------------------- HeckeEigenform

HeckeEigenform::HeckeEigenform(int weight, int index, int dim, i64 N, std::vector<i64> primes,
                               std::vector<long double> lambda_p,
                               std::vector<std::string> lambda_p_text)
    : weight_(weight),
      index_(index),
      dim_(dim),
      N_(N),
      primes_(std::move(primes)),
      lambda_p_(std::move(lambda_p)),
      lambda_p_text_(std::move(lambda_p_text)) {
  dense_.assign(static_cast<std::size_t>(N_ + 1), 0.0L);
  if (N_ >= 1) dense_[1] = 1.0L;
  const arith::Sieve sieve(std::max<i64>(N_, 2));
  for (i64 n = 2; n <= N_; ++n) {
    const i64 p = sieve.spf(n);
    i64 m = n, pa = 1;
    int a = 0;
    while (m % p == 0) {
      m /= p;
      pa *= p;
      ++a;
    }
    long double lpa;
    if (m == 1) {
      // prime power: recursion λ(p^{a}) = λ(p)λ(p^{a-1}) − λ(p^{a-2})
      const long double lp = lambda_p_[prime_slot(p)];
      long double prev = 1.0L, cur = lp;
      for (int j = 2; j <= a; ++j) {
        const long double nxt = lp * cur - prev;
        prev = cur;
        cur = nxt;
      }
      lpa = cur;
      dense_[static_cast<std::size_t>(n)] = lpa;
    } else {
      dense_[static_cast<std::size_t>(n)] =
          dense_[static_cast<std::size_t>(pa)] * dense_[static_cast<std::size_t>(m)];
    }
  }
}

std::size_t HeckeEigenform::prime_slot(i64 p) const {
  const auto it = std::lower_bound(primes_.begin(), primes_.end(), p);
  if (it == primes_.end() || *it != p) throw ExtendTableError(p);
  return static_cast<std::size_t>(it - primes_.begin());
}

long double HeckeEigenform::lambda_prime(i64 p) const { return lambda_p_[prime_slot(p)]; }

const std::string& HeckeEigenform::lambda_prime_text(i64 p) const {
  return lambda_p_text_[prime_slot(p)];
}

long double HeckeEigenform::lambda_ld(i64 n) const {
  if (n < 1) throw DomainError("lambda: n must be positive");
  if (n <= N_) return dense_[static_cast<std::size_t>(n)];
  long double v = 1.0L;
  for (auto [p, a] : arith::factorize(n)) {
    const long double lp = lambda_prime(p);
    long double prev = 1.0L, cur = lp;
    for (int j = 2; j <= a; ++j) {
      const long double nxt = lp * cur - prev;
      prev = cur;
      cur = nxt;
    }
    v *= cur;
  }
  return v;
}

double HeckeEigenform::lambda(i64 n) const { return static_cast<double>(lambda_ld(n)); }

double HeckeEigenform::log_a1_squared() const {
  return std::log(2.0 * std::numbers::pi * std::numbers::pi) - std::log(sym2_L1_) -
         std::lgamma(static_cast<double>(weight_));
}

double HeckeEigenform::a1_squared() const { return std::exp(log_a1_squared()); }

double lambda_extended(const HeckeEigenform& f, i64 n) { return f.lambda(n); }

// ---------------------------------------------------------------- builder

namespace {

EigenBasis build_basis(int k, i64 N, const EigenOptions& options) {
  const int d = cusp_dimension(k);
  const arith::Sieve sieve(std::max<i64>(N, 2));
  std::vector<i64> primes;
  for (i64 p : sieve.primes())
    if (p <= N) primes.push_back(p);

  PrimeTable table;
  std::vector<std::vector<long double>> direct(static_cast<std::size_t>(d));
  const std::string path = options.cache_dir.empty() ? "" : cache_path(options.cache_dir, k);
  const bool cached = !path.empty() && load_cache(path, k, N, table);

  if (!cached) {
    const auto basis = victor_miller_basis(k, std::max<i64>(N, 2 * d + 2));
    const auto M = t2_matrix(basis, k);
    const auto cp = charpoly(M);
    const auto roots = real_roots(M, cp);
    table.dim = d;
    table.N = N;
    table.primes = primes;
    table.text.assign(static_cast<std::size_t>(d), {});
    const i64 direct_limit = std::min(options.direct_limit, N);
    for (int f = 0; f < d; ++f) {
      const auto c = eigenvector(M, roots[static_cast<std::size_t>(f)]);
      auto coefficient = [&](i64 n) {
        mpf_class a(0, kPrec);
        for (int i = 0; i < d; ++i) a += c[static_cast<std::size_t>(i)] * to_mpf(basis[static_cast<std::size_t>(i)][n]);
        mpf_class scale(0, kPrec);
        scale = sqrt(mpf_class(static_cast<double>(n), kPrec));
        mpf_class pw(1, kPrec);
        for (int j = 0; j < k - 1; ++j) pw *= scale;
        return mpf_class(a / pw, kPrec);
      };
      auto& txt = table.text[static_cast<std::size_t>(f)];
      txt.reserve(primes.size());
      for (i64 p : primes) txt.push_back(mpf_text(coefficient(p), 30));
      auto& dir = direct[static_cast<std::size_t>(f)];
      dir.assign(static_cast<std::size_t>(direct_limit + 1), 0.0L);
      for (i64 n = 1; n <= direct_limit; ++n)
        dir[static_cast<std::size_t>(n)] = std::strtold(mpf_text(coefficient(n), 30).c_str(), nullptr);
    }
    if (!path.empty()) save_cache(path, k, table);
  }

  EigenBasis out;
  for (int f = 0; f < d; ++f) {
    const auto& txt = table.text[static_cast<std::size_t>(f)];
    std::vector<long double> vals(txt.size());
    for (std::size_t i = 0; i < txt.size(); ++i) vals[i] = std::strtold(txt[i].c_str(), nullptr);
    auto form = std::make_shared<HeckeEigenform>(k, f, d, N, table.primes, std::move(vals), txt);
    if (!cached) form->set_direct(std::move(direct[static_cast<std::size_t>(f)]));
    const double X = std::min(options.sym2_X, std::floor(static_cast<double>(N) / 39.0));
    const auto L1 = lvalues::L_sym2_at_1(*form, X);
    form->set_sym2(L1.value, L1.stability, X);
    out.push_back(std::move(form));
  }
  return out;
}

}  // namespace

EigenBasis hecke_eigenbasis(int k, i64 N, const EigenOptions& options) {
  check_weight(k);
  if (N < 2) throw InsufficientPrecisionError("hecke_eigenbasis: N must be at least 2");
  static std::mutex mu;
  static std::map<std::tuple<int, i64, double>, EigenBasis> memo;
  const auto key = std::make_tuple(k, N, options.sym2_X);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
  }
  EigenBasis b = build_basis(k, N, options);
  std::lock_guard<std::mutex> lock(mu);
  memo[key] = b;
  return b;
}

}  // namespace cuspmass::eigen
