#include "cuspmass/mass.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cuspmass/error.hpp"
#include "cuspmass/lvalues.hpp"
#include "cuspmass/numeric.hpp"
#include "cuspmass/special.hpp"

namespace cuspmass::mass {

namespace {

constexpr double kPi = std::numbers::pi;
const double kLog4Pi = std::log(4.0 * kPi);
constexpr double kTermCut = -33.0;  // e^{-33} ≈ 5e-15

// log of the n-th coefficient size without λ and a₁: (k-1)/2 log(4πn) - 2πny
double log_profile(int k, double n, double y) {
  return 0.5 * (k - 1) * (kLog4Pi + std::log(n)) - 2.0 * kPi * n * y;
}

int terms_for(int k, double y) {
  const double nstar = std::max(1.0, (k - 1) / (4.0 * kPi * y));
  const double peak = log_profile(k, nstar, y);
  for (int n = 1;; ++n) {
    if (n < nstar) continue;
    const double ln = log_profile(k, n, y) + std::log(2.0 * std::sqrt(static_cast<double>(n)));
    const double ratio = std::exp(log_profile(k, n + 1, y) - log_profile(k, n, y));
    if (ratio < 0.95 && ln - std::log1p(-ratio) < peak + kTermCut) return n;
    if (n > 50000000) throw TailBoundError("F: term count overflow at small height", n);
  }
}

struct GridLayout {
  // region y ≥ 1: rows of nx points
  std::vector<double> row_y, row_w;
  std::vector<double> xs;  // trapezoid abscissae, weight 1/nx each
  // region below y = 1: scattered nodes
  std::vector<cplx> arc_z;
  std::vector<double> arc_w;
};

GridLayout layout(const FundamentalDomainGrid& g) {
  GridLayout L;
  for (int i = 0; i < g.nx; ++i) L.xs.push_back(-0.5 + static_cast<double>(i) / g.nx);
  const auto& gy = numeric::gauss_legendre(g.ny);
  const int npan = std::max(1, static_cast<int>(std::ceil((g.y_max - 1.0) / g.panel)));
  const double hw = 0.5 * (g.y_max - 1.0) / npan;
  for (int p = 0; p < npan; ++p) {
    const double mid = 1.0 + (2 * p + 1) * hw;
    for (std::size_t j = 0; j < gy.nodes.size(); ++j) {
      const double y = mid + hw * gy.nodes[j];
      L.row_y.push_back(y);
      L.row_w.push_back(hw * gy.weights[j] / (y * y));
    }
  }
  const auto& ga = numeric::gauss_legendre(g.arc_order);
  for (std::size_t i = 0; i < ga.nodes.size(); ++i) {
    const double x = 0.25 + 0.25 * ga.nodes[i];
    const double wx = 0.25 * ga.weights[i];
    const double y0 = std::sqrt(1.0 - x * x);
    const double h = 0.5 * (1.0 - y0);
    for (std::size_t j = 0; j < ga.nodes.size(); ++j) {
      const double y = y0 + h * (1.0 + ga.nodes[j]);
      L.arc_z.emplace_back(x, y);
      L.arc_w.push_back(2.0 * wx * h * ga.weights[j] / (y * y));
    }
  }
  return L;
}

// Values of F on the layout: rows first (row-major), then arc nodes.
std::vector<cplx> sample(const FormEvaluator& F, const GridLayout& L) {
  const std::size_t nx = L.xs.size(), nr = L.row_y.size();
  std::vector<cplx> out(nr * nx + L.arc_z.size());
  numeric::parallel_for(nr, [&](std::size_t r) {
    std::vector<cplx> row;
    F.row(L.row_y[r], L.xs, row);
    std::copy(row.begin(), row.end(), out.begin() + static_cast<std::ptrdiff_t>(r * nx));
  });
  numeric::parallel_for(L.arc_z.size(), [&](std::size_t i) { out[nr * nx + i] = F(L.arc_z[i]); });
  return out;
}

// Σ w g(F) in the layout order with a deterministic reduction
template <class Fn>
double reduce(const GridLayout& L, const std::vector<cplx>& vals, Fn&& g) {
  const std::size_t nx = L.xs.size(), nr = L.row_y.size();
  std::vector<double> parts(nr + 1, 0.0);
  for (std::size_t r = 0; r < nr; ++r) {
    long double s = 0.0L;
    for (std::size_t i = 0; i < nx; ++i) s += g(r * nx + i);
    parts[r] = L.row_w[r] * static_cast<double>(s) / static_cast<double>(nx);
  }
  long double s = 0.0L;
  for (std::size_t i = 0; i < L.arc_z.size(); ++i) s += L.arc_w[i] * g(nr * nx + i);
  parts[nr] = static_cast<double>(s);
  (void)vals;
  return numeric::pairwise_sum(parts);
}

// Upper bound for ∫_{y_max}^∞ |F|^p dy/y² using the first coefficient with a
// factor 2 allowance for the rest of the series.
double cusp_tail(const HeckeEigenform& f, double p, double y_max) {
  const int k = f.weight();
  const double log_c = 0.5 * f.log_a1_squared() + 0.5 * (k - 1) * kLog4Pi + std::log(2.0);
  const double a = p * k / 2.0 - 1.0;
  const double b = 2.0 * kPi * p;
  const double log_int = special::log_gamma(a) + special::log_incomplete_gamma_Q(a, b * y_max) -
                         a * std::log(b);
  return std::exp(p * log_c + log_int);
}

double y_top(int k, double y0) { return std::max(y0, k / (2.0 * kPi)) + 10.0 * std::sqrt(k) + 10.0; }

// Gauss panels of width ≤ `width` on [a, b]
template <class Fn>
double panels(Fn&& fn, double a, double b, double width, int order) {
  const int n = std::max(1, static_cast<int>(std::ceil((b - a) / width)));
  const auto& g = numeric::gauss_legendre(order);
  const double hw = 0.5 * (b - a) / n;
  std::vector<double> parts(static_cast<std::size_t>(n));
  numeric::parallel_for(parts.size(), [&](std::size_t p) {
    const double mid = a + (2.0 * static_cast<double>(p) + 1.0) * hw;
    double s = 0.0;
    for (std::size_t j = 0; j < g.nodes.size(); ++j) s += g.weights[j] * fn(mid + hw * g.nodes[j]);
    parts[p] = hw * s;
  });
  return numeric::pairwise_sum(parts);
}

double log_T_weight(int k, i64 m, i64 n) {
  const double l = static_cast<double>(m + n);
  return (k - 1) * (std::log(2.0) + 0.5 * std::log(static_cast<double>(m) * n) - std::log(l));
}

i64 auto_lmax(double a, double scale) {
  // smallest l past the transition with log Q(a, scale·l) < -50
  i64 l = 2;
  while (scale * l < a || special::log_incomplete_gamma_Q(a, scale * static_cast<double>(l)) > -50.0) ++l;
  return l;
}

}  // namespace

// ------------------------------------------------------------ evaluation

FormEvaluator::FormEvaluator(const HeckeEigenform& f)
    : f_(&f), k_(f.weight()), log_a1_(0.5 * f.log_a1_squared()) {}

int FormEvaluator::required_terms(double y) const {
  if (!(y > 0.0)) throw DomainError("F: Im z must be positive");
  return terms_for(k_, y);
}

void FormEvaluator::coefficients(double y, int n, std::vector<double>& b) const {
  b.assign(static_cast<std::size_t>(n + 1), 0.0);
  const double base = log_a1_ + 0.5 * k_ * std::log(y);
  for (int j = 1; j <= n; ++j)
    b[static_cast<std::size_t>(j)] = f_->lambda(j) * std::exp(base + log_profile(k_, j, y));
}

cplx FormEvaluator::operator()(cplx z, int n_terms) const {
  const double y = z.imag();
  const int req = required_terms(y);
  if (n_terms > 0 && n_terms < req)
    throw TailBoundError("F: " + std::to_string(n_terms) + " terms leave a tail above 1e-12; need " +
                             std::to_string(req),
                         req);
  const int n = n_terms > 0 ? n_terms : req;
  if (n > f_->prime_limit()) throw ExtendTableError(n);
  std::vector<double> b;
  coefficients(y, n, b);
  const cplx w = std::polar(1.0, 2.0 * kPi * (z.real() - std::floor(z.real())));
  cplx acc = 0.0;
  for (int j = n; j >= 1; --j) acc = (acc + b[static_cast<std::size_t>(j)]) * w;
  return acc;
}

void FormEvaluator::row(double y, const std::vector<double>& xs, std::vector<cplx>& out) const {
  const int n = required_terms(y);
  if (n > f_->prime_limit()) throw ExtendTableError(n);
  std::vector<double> b;
  coefficients(y, n, b);
  out.resize(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const cplx w = std::polar(1.0, 2.0 * kPi * (xs[i] - std::floor(xs[i])));
    cplx acc = 0.0;
    for (int j = n; j >= 1; --j) acc = (acc + b[static_cast<std::size_t>(j)]) * w;
    out[i] = acc;
  }
}

cplx evaluate_F(const HeckeEigenform& f, cplx z, int n_terms) { return FormEvaluator(f)(z, n_terms); }

// ------------------------------------------------------------ domain quadrature

FundamentalDomainGrid FundamentalDomainGrid::for_weight(int k, double refine) {
  FundamentalDomainGrid g;
  g.y_max = 2.0 * k / (4.0 * kPi) + 10.0 * std::sqrt(static_cast<double>(k));
  const int n1 = terms_for(k, 1.0);
  g.nx = static_cast<int>(std::ceil(std::max(64.0, 8.0 * n1 + 32.0) * refine));
  g.ny = static_cast<int>(std::ceil(24 * refine));
  g.arc_order = static_cast<int>(std::ceil(32 * refine));
  return g;
}

FundamentalDomainGrid FundamentalDomainGrid::refined(double factor) const {
  FundamentalDomainGrid g = *this;
  g.nx = static_cast<int>(std::ceil(nx * factor));
  g.ny = static_cast<int>(std::ceil(ny * factor));
  g.arc_order = static_cast<int>(std::ceil(arc_order * factor));
  return g;
}

DomainNodes domain_nodes(const FundamentalDomainGrid& grid) {
  const GridLayout L = layout(grid);
  DomainNodes out;
  for (std::size_t r = 0; r < L.row_y.size(); ++r)
    for (double x : L.xs) {
      out.z.emplace_back(x, L.row_y[r]);
      out.w.push_back(L.row_w[r] / static_cast<double>(L.xs.size()));
    }
  out.z.insert(out.z.end(), L.arc_z.begin(), L.arc_z.end());
  out.w.insert(out.w.end(), L.arc_w.begin(), L.arc_w.end());
  return out;
}

double domain_area(const FundamentalDomainGrid& grid) {
  const auto nodes = domain_nodes(grid);
  return numeric::pairwise_sum(nodes.w);
}

namespace {

double power_integral(const HeckeEigenform& f, double p, const FundamentalDomainGrid& grid) {
  const FormEvaluator F(f);
  const GridLayout L = layout(grid);
  const auto vals = sample(F, L);
  return reduce(L, vals, [&](std::size_t i) { return std::pow(std::abs(vals[i]), p); });
}

}  // namespace

QuadratureValue lp_norm(const HeckeEigenform& f, double p, const FundamentalDomainGrid& grid) {
  if (!(p >= 2.0)) throw DomainError("lp_norm: p must be at least 2");
  const double scale = (3.0 / kPi) * std::pow(kPi / 3.0, 0.5 * p);
  const double I = power_integral(f, p, grid);
  const double I2 = power_integral(f, p, grid.refined(1.5));
  const double tail = cusp_tail(f, p, grid.y_max);
  QuadratureValue out;
  out.value = std::pow(scale * I, 1.0 / p);
  const double v2 = std::pow(scale * I2, 1.0 / p);
  const double vt = std::pow(scale * (I + tail), 1.0 / p);
  out.tail = vt - out.value;
  out.est_error = std::abs(v2 - out.value) + out.tail;
  return out;
}

QuadratureValue lp_norm(const HeckeEigenform& f, double p) {
  return lp_norm(f, p, FundamentalDomainGrid::for_weight(f.weight()));
}

QuadratureValue l4_integral(const HeckeEigenform& f) {
  const auto grid = FundamentalDomainGrid::for_weight(f.weight());
  QuadratureValue out;
  out.value = power_integral(f, 4.0, grid);
  out.tail = cusp_tail(f, 4.0, grid.y_max);
  out.est_error = std::abs(power_integral(f, 4.0, grid.refined(1.5)) - out.value) + out.tail;
  return out;
}

std::vector<double> inner_products_F2_G(const HeckeEigenform& f, const eigen::EigenBasis& basis) {
  const int k = f.weight();
  const auto grid = FundamentalDomainGrid::for_weight(2 * k);
  const GridLayout L = layout(grid);
  const FormEvaluator F(f);
  const auto fv = sample(F, L);
  std::vector<double> out;
  for (const auto& g : basis) {
    if (g->weight() != 2 * k) throw DomainError("inner_products_F2_G: basis must have weight 2k");
    const FormEvaluator G(*g);
    const auto gv = sample(G, L);
    out.push_back(reduce(L, gv, [&](std::size_t i) { return (fv[i] * fv[i] * std::conj(gv[i])).real(); }));
  }
  return out;
}

// ------------------------------------------------------------ cusp integrals

double cusp_integral_P(const HeckeEigenform& f, double y0) {
  if (!(y0 > 0.0)) throw DomainError("cusp_integral_P: y0 must be positive");
  const int k = f.weight();
  const FormEvaluator F(f);
  const int nx = std::max(64, 8 * F.required_terms(y0) + 32);
  std::vector<double> xs;
  for (int i = 0; i < nx; ++i) xs.push_back(-0.5 + static_cast<double>(i) / nx);
  auto integrand = [&](double y) {
    std::vector<cplx> row;
    F.row(y, xs, row);
    long double s = 0.0L;
    for (const auto& v : row) s += std::pow(std::norm(v), 2);
    return static_cast<double>(s) / nx / (y * y);
  };
  return panels(integrand, y0, y_top(k, y0), 0.5, 24);
}

double cusp_integral_P_sum(const HeckeEigenform& f, double y0, i64 l_max) {
  const int k = f.weight();
  const double a = 2.0 * k - 1.0, scale = 4.0 * kPi * y0;
  if (l_max <= 0) l_max = auto_lmax(a, scale);
  long double s = 0.0L;
  for (i64 l = l_max; l >= 2; --l) {
    const double T = shifted_T(f, l);
    s += T * T / static_cast<double>(l) * special::incomplete_gamma_Q(a, scale * static_cast<double>(l));
  }
  const double L1 = f.sym2_L1();
  const double pre = std::exp(2.5 * std::log(kPi) + special::log_gamma(k - 0.5) -
                              special::log_gamma(static_cast<double>(k))) / (L1 * L1);
  return pre * static_cast<double>(s);
}

double cusp_integral_P_main(const HeckeEigenform& f, double y0) {
  const int k = f.weight();
  const i64 lim = static_cast<i64>(std::floor(k / (2.0 * kPi * y0)));
  long double s = 0.0L;
  for (i64 l = 2; l <= lim; ++l) {
    const double S = shifted_S(f, l);
    s += S * S / static_cast<double>(l);
  }
  const double L1 = f.sym2_L1();
  const double pre = std::exp(2.5 * std::log(kPi) + special::log_gamma(k - 0.5) -
                              special::log_gamma(static_cast<double>(k))) / (L1 * L1);
  return pre * static_cast<double>(s);
}

double geodesic_R(const HeckeEigenform& f, double y0) {
  if (!(y0 > 0.0)) throw DomainError("geodesic_R: y0 must be positive");
  const FormEvaluator F(f);
  return panels([&](double y) { return std::norm(F(cplx(0.0, y))) / y; }, y0,
                y_top(f.weight(), y0), 0.5, 24);
}

double geodesic_R_sum(const HeckeEigenform& f, double y0, i64 l_max) {
  const int k = f.weight();
  const double scale = 2.0 * kPi * y0;
  if (l_max <= 0) l_max = auto_lmax(k, scale);
  long double s = 0.0L;
  for (i64 l = l_max; l >= 2; --l)
    s += shifted_T(f, l) / static_cast<double>(l) * special::incomplete_gamma_Q(k, scale * static_cast<double>(l));
  return kPi / f.sym2_L1() * static_cast<double>(s);
}

GeodesicValue geodesic_I(const HeckeEigenform& f, GeodesicMethod method,
                         const eigen::EigenBasis* basis_2k) {
  const int k = f.weight();
  GeodesicValue out;
  switch (method) {
    case GeodesicMethod::Direct: {
      const FormEvaluator F(f);
      const double Y = y_top(k, 1.0);
      const double u0 = std::log(Y);
      out.value = panels([&](double u) { return std::norm(F(cplx(0.0, std::exp(u)))); }, -u0, u0,
                         0.25, 24);
      // both ends equal R(Y) by y ↦ 1/y; bound it by the leading coefficient
      out.est_error = 2.0 * cusp_tail(f, 2.0, Y) * Y;
      break;
    }
    case GeodesicMethod::Moment: {
      const double a = 0.5 * k;
      const double lg0 = special::log_gamma(a);
      double t_max = 1.0;
      while (2.0 * (special::log_gamma(cplx(a, t_max)).real() - lg0) + std::log1p(t_max) > -46.0)
        t_max += 1.0;
      const double integral =
          2.0 * panels([&](double t) { return std::norm(lvalues::gamma_weighted_L(f, t)); }, 0.0,
                       t_max, 1.0, 20);
      const double log_pre = (k - 2) * std::log(2.0) + 2.0 * lg0 -
                             special::log_gamma(static_cast<double>(k)) - std::log(f.sym2_L1());
      out.value = std::exp(log_pre) * integral;
      out.est_error = std::exp(log_pre - 46.0);
      break;
    }
    case GeodesicMethod::Spectral: {
      if (!basis_2k) throw PreconditionError("geodesic_I: spectral route needs B_{2k}");
      const auto ip = inner_products_F2_G(f, *basis_2k);
      long double s = 0.0L;
      for (std::size_t i = 0; i < basis_2k->size(); ++i) {
        const auto& g = *(*basis_2k)[i];
        const auto cv = lvalues::L_half_g(g);
        if (cv.forced_zero) continue;
        const double log_fac = 0.5 * g.log_a1_squared() + k * std::log(2.0) - 0.5 * std::log(4.0 * kPi) +
                               special::log_gamma(static_cast<double>(k));
        s += ip[i] * cv.value * std::exp(log_fac);
      }
      out.value = static_cast<double>(s);
      break;
    }
  }
  return out;
}

// ------------------------------------------------------------ shifted sums

double shifted_T(const HeckeEigenform& f, i64 l) {
  if (l < 2) return 0.0;
  const int k = f.weight();
  long double s = 0.0L;
  for (i64 m = 1; m < l; ++m)
    s += f.lambda_ld(m) * f.lambda_ld(l - m) * std::exp(static_cast<long double>(log_T_weight(k, m, l - m)));
  return static_cast<double>(s);
}

double shifted_S(const HeckeEigenform& f, i64 l) {
  if (l < 2) return 0.0;
  const int k = f.weight();
  const double l2 = static_cast<double>(l) * static_cast<double>(l);
  long double s = 0.0L;
  for (i64 m = 1; m < l; ++m) {
    const double d = static_cast<double>(2 * m - l);
    s += f.lambda_ld(m) * f.lambda_ld(l - m) * std::exp(static_cast<long double>(-d * d * k / (2.0 * l2)));
  }
  return static_cast<double>(s);
}

ShiftedConvolutionTable ShiftedConvolutionTable::build(const HeckeEigenform& f, i64 l_max) {
  ShiftedConvolutionTable t;
  t.k = f.weight();
  t.T.assign(static_cast<std::size_t>(l_max + 1), 0.0);
  t.S.assign(static_cast<std::size_t>(l_max + 1), 0.0);
  numeric::parallel_for(static_cast<std::size_t>(std::max<i64>(l_max - 1, 0)), [&](std::size_t i) {
    const i64 l = static_cast<i64>(i) + 2;
    t.T[static_cast<std::size_t>(l)] = shifted_T(f, l);
    t.S[static_cast<std::size_t>(l)] = shifted_S(f, l);
  });
  return t;
}

double ShiftedConvolutionTable::tbound_constant(double eps) const {
  double c = 0.0;
  const double sk = std::sqrt(static_cast<double>(k));
  for (std::size_t l = 2; l < T.size(); ++l) {
    const double ld = static_cast<double>(l);
    c = std::max(c, std::abs(T[l]) / (std::pow(ld, eps) * (1.0 + ld / sk)));
  }
  return c;
}

double ShiftedConvolutionTable::approximation_constant(double eps) const {
  double c = 0.0;
  for (std::size_t l = 2; l < T.size(); ++l) {
    const double ld = static_cast<double>(l);
    c = std::max(c, std::abs(T[l] - S[l]) / (std::pow(ld, 1.0 + eps) * std::pow(k, -1.5)));
  }
  return c;
}

namespace {
double log_poincare_factor(const HeckeEigenform& f, i64 l) {
  const int k = f.weight();
  return (k - 1) * std::log(2.0) + 0.5 * std::log(4.0 * kPi * static_cast<double>(l)) -
         f.log_a1_squared() - 0.5 * special::log_gamma(2.0 * k - 1.0);
}
}  // namespace

double poincare_inner(const HeckeEigenform& f, i64 l) {
  return shifted_T(f, l) * std::exp(-log_poincare_factor(f, l));
}

double poincare_to_T(const HeckeEigenform& f, i64 l, double inner) {
  return inner * std::exp(log_poincare_factor(f, l));
}

}  // namespace cuspmass::mass
