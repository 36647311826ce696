#include "cuspmass/lvalues.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cuspmass/error.hpp"
#include "cuspmass/numeric.hpp"
#include "cuspmass/special.hpp"

namespace cuspmass::lvalues {

namespace {

constexpr double kPi = std::numbers::pi;
const double kLog2Pi = std::log(2.0 * kPi);
constexpr double kLogPi = 1.14472988584940017414342735135305;

// log(1e-18): node sets are cut where the integrand drops this far below its peak
constexpr double kNodeCut = -41.5;
constexpr double kStep = 0.05;
constexpr std::size_t kMaxNodes = 400000;

// log|Γ(1/2 - m)| and its sign, m ≥ 0 integer
std::pair<double, int> log_gamma_half_minus(int m) {
  const double v = m * std::log(4.0) + std::lgamma(m + 1.0) + 0.5 * kLogPi - std::lgamma(2.0 * m + 1.0);
  return {v, (m % 2 == 0) ? 1 : -1};
}

// log Γ∞(s) for sym² f at positive integer s (all gammas positive)
double log_gamma_inf_pos(int k, int s) {
  return -0.5 * (s + 1) * kLogPi + special::log_gamma(0.5 * (s + 1)) - s * kLog2Pi +
         special::log_gamma(static_cast<double>(s + k - 1));
}

struct SquareTable {
  std::vector<long double> sq;  // λ(n²)
};

double smoothed_sum(const std::vector<long double>& sq, double X) {
  const i64 n1 = static_cast<i64>(std::floor(39.0 * X));
  long double total = 0.0L;
  for (i64 d1 = 1; d1 <= n1; ++d1) {
    long double inner = 0.0L;
    for (i64 d2 = 1; d1 * d2 * d2 <= n1; ++d2) {
      const double q = static_cast<double>(d1 * d2 * d2);
      inner += std::exp(-q / X) / static_cast<double>(d2 * d2);
    }
    total += sq[static_cast<std::size_t>(d1)] * inner / static_cast<long double>(d1);
  }
  return static_cast<double>(total);
}

double corrected_value(int k, const std::vector<long double>& sq, double X, double* raw) {
  const double S = smoothed_sum(sq, X);
  if (raw) *raw = S;
  const i64 n1 = static_cast<i64>(std::floor(39.0 * X));
  double corr = 0.0;
  for (int j = 3; j <= k - 1; j += 2) {
    long double dir = 0.0L;
    for (i64 n = n1; n >= 1; --n)
      dir += sq[static_cast<std::size_t>(n)] * std::pow(static_cast<long double>(n), -j);
    const double Lj = special::zeta(2.0 * j) * static_cast<double>(dir);
    // Γ∞(1-j): (s+1)/2 = 1/2 - (j-1)/2
    const auto [lg_half, sgn] = log_gamma_half_minus((j - 1) / 2);
    const double log_inf_neg = -0.5 * (2 - j) * kLogPi + lg_half - (1 - j) * kLog2Pi +
                               special::log_gamma(static_cast<double>(k - j));
    const double log_term = log_gamma_inf_pos(k, j) - log_inf_neg - j * std::log(X) -
                            std::lgamma(j + 1.0);
    corr += sgn * std::exp(log_term) * Lj;
  }
  const double r0 = (k - 1) / (2.0 * kPi * kPi);
  return (S + corr) / (1.0 - r0 / X);
}

}  // namespace

// ------------------------------------------------------------------ gamma factor

std::vector<double> GammaFactorSpec::shifts() const {
  const double a1 = k + kappa - 1.5, a2 = kappa - 0.5;
  const double a3 = branch() == Branch::KappaAtLeastK ? kappa - k + 0.5 : k - kappa - 0.5;
  return {a1, a2, a3};
}

cplx log_gamma_factor(const GammaFactorSpec& spec, cplx s) {
  cplx v = -3.0 * s * kLog2Pi;
  for (double a : spec.shifts()) v += special::log_gamma(s + a);
  return v;
}

GammaValue gamma_factor(const GammaFactorSpec& spec, cplx s) {
  const cplx lv = log_gamma_factor(spec, s);
  GammaValue out;
  out.log_modulus = lv.real();
  out.phase = std::remainder(lv.imag(), 2.0 * kPi);
  out.representable = std::abs(lv.real()) < 700.0;
  if (out.representable) out.value = std::polar(std::exp(lv.real()), out.phase);
  return out;
}

int root_number(int k, int kappa) {
  const bool plus = (kappa >= k && kappa % 2 == 0) || (kappa < k && kappa % 2 != 0);
  return plus ? 1 : -1;
}

// ------------------------------------------------------------------ cutoff W

CutoffW::CutoffW(GammaFactorSpec spec, int A) : spec_(spec), A_(A) {
  if (A_ < 1) throw ConfigError("CutoffW: A must be a positive integer");
  if (spec_.k < 12 || spec_.kappa < 1) throw DomainError("CutoffW: invalid (k, kappa)");
  log_lambda_half_ = log_gamma_factor(spec_, 0.5);
  // mollifier poles sit at Re s = ±5A; stay safely inside
  max_abscissa_ = std::max(1, std::min(70, 5 * A_ - 2));
  phi0_.assign(static_cast<std::size_t>(max_abscissa_ + 1), 0.0);
  for (int c = 1; c <= max_abscissa_; ++c)
    phi0_[static_cast<std::size_t>(c)] = log_integrand(cplx(c, 0.0)).real();
}

cplx CutoffW::log_integrand(cplx s) const {
  const double scale = kPi / (10.0 * A_);
  return log_gamma_factor(spec_, 0.5 + s) - log_lambda_half_ -
         60.0 * A_ * std::log(std::cos(scale * s)) - std::log(s);
}

const ContourNodes& CutoffW::nodes(double c) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = node_cache_.find(c);
  if (it != node_cache_.end()) return *it->second;
  auto ns = std::make_unique<ContourNodes>();
  ns->abscissa = c;
  ns->h = kStep;
  double peak = -1e300;
  std::size_t below = 0;
  for (std::size_t j = 0;; ++j) {
    if (j >= kMaxNodes)
      throw ContourError("cutoff W: integrand on Re s = " + std::to_string(c) +
                         " has not decayed after t = " + std::to_string(j * kStep));
    const double t = static_cast<double>(j) * kStep;
    const cplx lg = log_integrand(cplx(c, t));
    ns->t.push_back(t);
    ns->log_re.push_back(lg.real());
    ns->log_im.push_back(lg.imag());
    peak = std::max(peak, lg.real());
    below = lg.real() < peak + kNodeCut ? below + 1 : 0;
    if (below >= 20) break;
  }
  ns->log_peak = peak;
  auto& ref = *ns;
  node_cache_.emplace(c, std::move(ns));
  return ref;
}

double CutoffW::evaluate(double x, double c, bool derivative) const {
  const ContourNodes& ns = nodes(c);
  const double L = std::log(x);
  long double sum = 0.0L;
  for (std::size_t j = ns.t.size(); j-- > 0;) {
    const double t = ns.t[j];
    cplx term = std::polar(std::exp(ns.log_re[j] - c * L), ns.log_im[j] - t * L);
    if (derivative) term *= -cplx(c, t);
    const double w = j == 0 ? 0.5 : 1.0;
    sum += w * term.real();
  }
  double v = static_cast<double>(sum) * ns.h / kPi;
  if (c < 0.0 && !derivative) v += 1.0;
  return v;
}

double CutoffW::pick_abscissa(double x) const {
  if (x < 1.0) return -0.5;
  const double L = std::log(x);
  int best = 1;
  double best_val = phi0_[1] - L;
  for (int c = 2; c <= max_abscissa_; ++c) {
    const double v = phi0_[static_cast<std::size_t>(c)] - c * L;
    if (v < best_val) {
      best_val = v;
      best = c;
    }
  }
  return best;
}

double CutoffW::value(double x) const {
  if (!(x > 0.0)) throw DomainError("cutoff W: x must be positive");
  const double c = pick_abscissa(x);
  if (c > 0 && phi0_[static_cast<std::size_t>(c)] - c * std::log(x) < -760.0) return 0.0;
  return evaluate(x, c, false);
}

double CutoffW::x_derivative(double x) const {
  if (!(x > 0.0)) throw DomainError("cutoff W: x must be positive");
  const double c = pick_abscissa(x);
  if (c > 0 && phi0_[static_cast<std::size_t>(c)] - c * std::log(x) < -760.0) return 0.0;
  return evaluate(x, c, true);
}

double CutoffW::value_on(double x, double c) const {
  if (!(x > 0.0)) throw DomainError("cutoff W: x must be positive");
  if (c == 0.0 || c <= -1.0 || c >= 5.0 * A_)
    throw DomainError("cutoff W: abscissa outside the admissible strip");
  return evaluate(x, c, false);
}

const std::vector<double>& CutoffW::integer_table(i64 n_max) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (static_cast<i64>(table_.size()) > n_max) return table_;
  }
  // warm the node sets serially so the parallel loop only reads
  std::vector<double> abscissae;
  for (i64 n = 1; n <= n_max; ++n) {
    const double c = pick_abscissa(static_cast<double>(n));
    if (abscissae.empty() || abscissae.back() != c) abscissae.push_back(c);
  }
  for (double c : abscissae) nodes(c);
  std::vector<double> tab(static_cast<std::size_t>(n_max + 1), 0.0);
  numeric::parallel_for(static_cast<std::size_t>(n_max), [&](std::size_t i) {
    tab[i + 1] = value(static_cast<double>(i + 1));
  });
  std::lock_guard<std::mutex> lock(mu_);
  if (static_cast<i64>(table_.size()) <= n_max) table_ = std::move(tab);
  return table_;
}

double cutoff_W(const CutoffW& W, double x) { return W.value(x); }

// ------------------------------------------------------------------ L(1, sym² f)

double L_sym2_smoothed_sum(const HeckeEigenform& f, double X) {
  const i64 n1 = static_cast<i64>(std::floor(39.0 * X));
  if (n1 > f.prime_limit()) throw ExtendTableError(n1);
  return smoothed_sum(eigen::lambda_of_squares(f, n1), X);
}

Sym2L1 L_sym2_at_1(const HeckeEigenform& f, double X) {
  if (!(X >= 1.0)) throw DomainError("L_sym2_at_1: smoothing scale must be at least 1");
  const i64 n1 = static_cast<i64>(std::floor(39.0 * X));
  if (n1 > f.prime_limit()) throw ExtendTableError(n1);
  const auto sq = eigen::lambda_of_squares(f, n1);
  Sym2L1 out;
  out.X = X;
  out.value = corrected_value(f.weight(), sq, X, &out.raw);
  out.stability = std::abs(out.value - corrected_value(f.weight(), sq, 0.5 * X, nullptr));
  return out;
}

double L_sym2_dirichlet(const HeckeEigenform& f, double s, i64 n_max) {
  if (!(s > 1.0)) throw DomainError("L_sym2_dirichlet: s must exceed 1");
  if (n_max > f.prime_limit()) throw ExtendTableError(n_max);
  const auto sq = eigen::lambda_of_squares(f, n_max);
  long double acc = 0.0L;
  for (i64 n = n_max; n >= 1; --n)
    acc += sq[static_cast<std::size_t>(n)] * std::pow(static_cast<long double>(n), -s);
  return special::zeta(2.0 * s) * static_cast<double>(acc);
}

// ------------------------------------------------------------------ central values

CentralValue L_half_g(const HeckeEigenform& g, i64 terms) {
  CentralValue out;
  const int kappa = g.weight() / 2;
  if (kappa % 2 != 0) {
    out.forced_zero = true;
    return out;
  }
  i64 n_max = terms;
  if (n_max <= 0) {
    n_max = 1;
    while (special::log_incomplete_gamma_Q(kappa, 2.0 * kPi * static_cast<double>(n_max)) > -43.0)
      ++n_max;
  }
  if (n_max > g.prime_limit()) throw ExtendTableError(n_max);
  long double acc = 0.0L;
  for (i64 n = n_max; n >= 1; --n)
    acc += g.lambda_ld(n) / std::sqrt(static_cast<long double>(n)) *
           special::incomplete_gamma_Q(kappa, 2.0 * kPi * static_cast<double>(n));
  out.value = 2.0 * static_cast<double>(acc);
  out.terms = n_max;
  // |λ(n)| ≤ τ(n) ≤ 2√n, and Q(κ, 2πn) decays geometrically past the cut
  out.tail_bound = 4.0 * std::exp(special::log_incomplete_gamma_Q(
                             kappa, 2.0 * kPi * static_cast<double>(n_max + 1))) *
                   10.0;
  return out;
}

CentralValue L_half_sym2f_g(const eigen::SymSquareCoefficients& A, const HeckeEigenform& g,
                            const CutoffW& W, double C_W, SumOrder order) {
  CentralValue out;
  const auto& spec = W.spec();
  if (A.parent().weight() != spec.k || g.weight() != 2 * spec.kappa)
    throw DomainError("L_half_sym2f_g: weights do not match the gamma factor");
  if (root_number(spec.k, spec.kappa) < 0) {
    out.forced_zero = true;
    return out;
  }
  const i64 X = static_cast<i64>(std::floor(C_W * spec.k * spec.k));
  if (X > g.prime_limit()) throw ExtendTableError(X);
  if (X > A.parent().prime_limit()) throw ExtendTableError(X);
  const auto& Wt = W.integer_table(X);
  long double acc = 0.0L;
  auto term = [&](i64 m, i64 n) {
    const double w = Wt[static_cast<std::size_t>(n * m * m)];
    if (w == 0.0) return 0.0L;
    return static_cast<long double>(g.lambda(n) * A.A(m, n) * w /
                                    (std::sqrt(static_cast<double>(n)) * static_cast<double>(m)));
  };
  if (order == SumOrder::MOuter) {
    for (i64 m = 1; m * m <= X; ++m)
      for (i64 n = 1; n * m * m <= X; ++n) acc += term(m, n);
  } else {
    for (i64 n = 1; n <= X; ++n)
      for (i64 m = 1; n * m * m <= X; ++m) acc += term(m, n);
  }
  out.value = 2.0 * static_cast<double>(acc);
  out.terms = X;
  // crude: first shell beyond the cut, with divisor-type coefficient bounds
  const double lx = std::log(static_cast<double>(X));
  out.tail_bound = 8.0 * std::abs(W.value(static_cast<double>(X))) *
                   std::sqrt(static_cast<double>(X)) * lx * lx;
  return out;
}

double mean_value_diag(const eigen::SymSquareCoefficients& A, i64 r, const CutoffW& W,
                       double C_W) {
  const auto& spec = W.spec();
  const i64 X = static_cast<i64>(std::floor(C_W * spec.k * spec.k));
  long double acc = 0.0L;
  for (i64 m = 1; r * m * m <= X; ++m)
    acc += A.A(m, r) * W.value(static_cast<double>(r * m * m)) / static_cast<double>(m);
  return 2.0 / special::zeta(2.0) / std::sqrt(static_cast<double>(r)) * static_cast<double>(acc);
}

MeanValue mean_value_M(const eigen::SymSquareCoefficients& A, i64 r,
                       const eigen::EigenBasis& basis, const CutoffW& W, double C_W) {
  if (r < 1) throw DomainError("mean_value_M: r must be positive");
  const auto& spec = W.spec();
  MeanValue out;
  if (root_number(spec.k, spec.kappa) < 0) {
    out.forced_zero = true;
    out.central_values.assign(basis.size(), 0.0);
    return out;
  }
  long double acc = 0.0L;
  for (const auto& g : basis) {
    if (g->weight() != 2 * spec.kappa) throw DomainError("mean_value_M: basis weight mismatch");
    const double cv = L_half_sym2f_g(A, *g, W, C_W).value;
    out.central_values.push_back(cv);
    acc += g->lambda(r) * cv / g->sym2_L1();
  }
  out.M = 12.0 / (2.0 * spec.kappa - 1.0) * static_cast<double>(acc);
  out.M_diag = mean_value_diag(A, r, W, C_W);
  out.M_offdiag = out.M - out.M_diag;
  return out;
}

OffDiagonal mean_value_offdiag_kloosterman(const eigen::SymSquareCoefficients& A, i64 r,
                                           const CutoffW& W, double C_W) {
  const auto& spec = W.spec();
  const int nu = 2 * spec.kappa - 1;
  const i64 X = static_cast<i64>(std::floor(C_W * spec.k * spec.k));
  const auto& Wt = W.integer_table(X);
  const double log_nu_fact = std::lgamma(nu + 1.0);
  OffDiagonal out;
  long double acc = 0.0L;
  for (i64 n = 1; n <= X; ++n) {
    long double B = 0.0L;
    for (i64 m = 1; n * m * m <= X; ++m)
      B += A.A(m, n) * Wt[static_cast<std::size_t>(n * m * m)] / static_cast<double>(m);
    const double absB = std::abs(static_cast<double>(B));
    if (absB < 1e-22) continue;
    out.n_max = n;
    const double arg = 4.0 * kPi * std::sqrt(static_cast<double>(n * r));
    long double K = 0.0L;
    for (i64 c = 1;; ++c) {
      const double x = arg / static_cast<double>(c);
      // |J_ν(x)| ≤ (x/2)^ν/ν!; the remaining c-sum is dominated by a few terms
      const double log_bound = nu * std::log(0.5 * x) - log_nu_fact;
      if (log_bound + std::log(absB) < std::log(1e-22) && x < 0.5 * nu) {
        out.c_max = std::max(out.c_max, c);
        break;
      }
      K += special::kloosterman(n, r, c) / static_cast<double>(c) * special::bessel_j(nu, x);
    }
    acc += B / std::sqrt(static_cast<double>(n)) * K;
  }
  const double sign = spec.kappa % 2 == 0 ? 1.0 : -1.0;
  out.value = 4.0 * kPi * sign / special::zeta(2.0) * static_cast<double>(acc);
  return out;
}

// ------------------------------------------------------------------ degree-2 line values

cplx gamma_weighted_L(const HeckeEigenform& f, double t) {
  const int k = f.weight();
  const cplx a(0.5 * k, t);
  const double eps = (k / 2) % 2 == 0 ? 1.0 : -1.0;
  const double scale = std::exp((special::log_gamma(a) - special::log_gamma(0.5 * k)).real());
  const cplx twist = std::polar(1.0, 2.0 * t * kLog2Pi);
  cplx sum = 0.0;
  for (i64 n = 1;; ++n) {
    const double x = 2.0 * kPi * static_cast<double>(n);
    const cplx R = special::upper_gamma_ratio(a, x);
    const double ln = std::log(static_cast<double>(n));
    const cplx term = std::polar(1.0, -t * ln) * R + eps * twist * std::polar(1.0, t * ln) * std::conj(R);
    sum += f.lambda(n) / std::sqrt(static_cast<double>(n)) * term;
    if (x > std::abs(a) + 2.0 && std::abs(R) < 1e-18 * std::max(scale, 1e-300)) break;
    if (n > f.prime_limit()) throw ExtendTableError(n);
  }
  return sum;
}

}  // namespace cuspmass::lvalues
