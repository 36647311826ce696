#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "cuspmass/arith.hpp"
#include "cuspmass/error.hpp"
#include "cuspmass/numeric.hpp"
#include "cuspmass/special.hpp"
#include "cuspmass/sym_square.hpp"
#include "cuspmass/verification.hpp"

namespace cuspmass::verify {

namespace {

constexpr double kPi = std::numbers::pi;

cplx lg(cplx z) { return special::log_gamma(z); }

// Highest frequency of the Bessel factor in the variable u = log y.
double bessel_frequency(const VoronoiSetup& s) {
  return 2.0 * kPi * std::sqrt(2.0 * s.N * static_cast<double>(s.r)) / static_cast<double>(s.c);
}

// Σ_j ψ(e^{u_j}) e^{-s u_j} h with the exponential advanced by a fixed ratio.
cplx trapezoid_mellin(const std::vector<double>& u, const std::vector<double>& psi, double hu,
                      cplx s) {
  if (u.empty()) return 0.0;
  const cplx step = std::exp(-s * hu);
  cplx ph = std::exp(-s * u.front()), acc = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    if (j % 256 == 0) ph = std::exp(-s * u[j]);
    acc += psi[j] * ph;
    ph *= step;
  }
  return acc * hu;
}

}  // namespace

double omega2(double t) {
  if (t <= 1.0 || t >= 2.0) return 0.0;
  return std::exp(4.0 - 1.0 / ((t - 1.0) * (2.0 - t)));
}

cplx voronoi_G(int k, cplx s, int sign) {
  // A gamma pole in a denominator is a zero of that factor.
  auto pole = [](cplx z) { return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()); };
  const double kk = k;
  const cplx d1 = 0.5 * (kk - s), d2 = 0.5 * (kk - 1.0 - s);
  if (pole(d1) || pole(d2)) return 0.0;
  const cplx outer = std::exp(lg(0.5 * (kk + 1.0 + s)) + lg(0.5 * (kk + s)) - lg(d1) - lg(d2));
  const cplx even = pole(0.5 * (1.0 - s)) ? cplx(0.0) : std::exp(lg(0.5 * (2.0 + s)) - lg(0.5 * (1.0 - s)));
  const cplx odd = pole(-0.5 * s) ? cplx(0.0) : std::exp(lg(0.5 * (1.0 + s)) - lg(-0.5 * s));
  return outer * (even - static_cast<double>(sign) * cplx(0.0, 1.0) * odd);
}

VoronoiKernel::VoronoiKernel(const VoronoiSetup& setup) : setup_(setup) {
  if (setup_.N <= 0.0 || setup_.c < 1 || setup_.r < 1 || setup_.kappa < 1 || setup_.k < 2)
    throw DomainError("VoronoiKernel: N, c, r, κ must be positive");
  if (setup_.sigma <= -1.0) throw DomainError("VoronoiKernel: abscissa must exceed -1");
  if (setup_.dt <= 0.0) throw DomainError("VoronoiKernel: dt must be positive");

  const double u0 = std::log(setup_.N), width = std::log(2.0);
  const double fb = bessel_frequency(setup_);
  auto build_nodes = [&](double T) {
    const double h = kPi / (8.0 * (T + fb));
    const auto m = static_cast<std::size_t>(std::ceil(width / h));
    hu_ = width / static_cast<double>(m);
    u_.clear();
    psi_u_.clear();
    for (std::size_t j = 1; j < m; ++j) {
      const double u = u0 + hu_ * static_cast<double>(j);
      u_.push_back(u);
      psi_u_.push_back(psi(std::exp(u)));
    }
  };
  auto q_abs = [&](double t) {
    const cplx s(setup_.sigma, t);
    const cplx m = trapezoid_mellin(u_, psi_u_, hu_, s);  // ψ̃(-s) = Σ ψ e^{-s u}
    return std::max(std::abs(voronoi_G(setup_.k, s, 1) * m),
                    std::abs(voronoi_G(setup_.k, s, -1) * m));
  };

  // Extend the contour until the integrand has dropped below the cutoff.
  double T = fb + 50.0;
  build_nodes(T);
  double peak = 0.0;
  for (double t = 0.0; t <= T; t += 1.0) peak = std::max({peak, q_abs(t), q_abs(-t)});
  if (!(peak > 0.0)) throw ContourError("VoronoiKernel: vanishing test function");
  for (int iter = 0;; ++iter) {
    if (iter > 400) throw ContourError("VoronoiKernel: Mellin transform does not decay");
    build_nodes(T);
    double edge = 0.0;
    for (double t = T - 10.0; t <= T; t += 1.0) edge = std::max({edge, q_abs(t), q_abs(-t)});
    tail_ratio_ = edge / peak;
    if (tail_ratio_ < setup_.mellin_tail) break;
    T += 50.0;
  }
  t_max_ = T;

  const auto J = static_cast<std::size_t>(std::ceil(T / setup_.dt));
  q_plus_.assign(2 * J + 1, 0.0);
  q_minus_.assign(2 * J + 1, 0.0);
  numeric::parallel_for(2 * J + 1, [&](std::size_t i) {
    const double t = (static_cast<double>(i) - static_cast<double>(J)) * setup_.dt;
    const cplx s(setup_.sigma, t);
    const cplx m = trapezoid_mellin(u_, psi_u_, hu_, s);
    q_plus_[i] = voronoi_G(setup_.k, s, 1) * m;
    q_minus_[i] = voronoi_G(setup_.k, s, -1) * m;
  });
}

double VoronoiKernel::psi(double y) const {
  const double w = omega2(y / setup_.N);
  if (w == 0.0) return 0.0;
  const double z = 4.0 * kPi * std::sqrt(y * static_cast<double>(setup_.r)) /
                   static_cast<double>(setup_.c);
  return w * special::bessel_j(2 * setup_.kappa - 1, z);
}

cplx VoronoiKernel::psi_mellin(cplx w) const { return trapezoid_mellin(u_, psi_u_, hu_, -w); }

cplx VoronoiKernel::operator()(double x, int sign) const {
  if (!(x > 0.0)) throw DomainError("Ψ^±: x must be positive");
  const auto& q = sign > 0 ? q_plus_ : q_minus_;
  const double L = std::log(kPi * kPi * kPi * x);
  const std::size_t n = q.size();
  const double J = static_cast<double>(n / 2);
  const cplx step = std::polar(1.0, -setup_.dt * L);
  cplx ph, acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j % 256 == 0) ph = std::polar(1.0, -(static_cast<double>(j) - J) * setup_.dt * L);
    acc += q[j] * ph;
    ph *= step;
  }
  return acc * (std::exp(-setup_.sigma * L) * setup_.dt / (4.0 * std::pow(kPi, 2.5)));
}

double VoronoiKernel::decay_scale() const {
  const double c = static_cast<double>(setup_.c), r = static_cast<double>(setup_.r);
  return std::sqrt(setup_.N) * std::pow(r, 1.5) / (c * c * c);
}

double VoronoiKernel::shape_bound(double x, int A) const {
  const double c = static_cast<double>(setup_.c), r = static_cast<double>(setup_.r);
  return (std::sqrt(x) * c / std::sqrt(r) + x * c * c / r) *
         std::pow(1.0 + x / decay_scale(), -static_cast<double>(A));
}

cplx voronoi_psi_kernel(int k, int kappa, double N, i64 c, i64 r, double x, int sign) {
  VoronoiSetup s;
  s.k = k;
  s.kappa = kappa;
  s.N = N;
  s.c = c;
  s.r = r;
  return VoronoiKernel(s)(x, sign);
}

VoronoiSides voronoi_sides(const eigen::SymSquareCoefficients& A, const VoronoiKernel& kernel,
                           i64 d, double dual_target) {
  const auto& st = kernel.setup();
  const i64 c = st.c, m = st.r;
  if (std::gcd(d, c) != 1) throw DomainError("Voronoi: d must be coprime to c");
  VoronoiSides out;

  const i64 dbar = c == 1 ? 0 : arith::mod_inverse(arith::mod(d, c), c);
  const auto n_lo = static_cast<i64>(std::ceil(st.N)), n_hi = static_cast<i64>(std::floor(2.0 * st.N));
  std::vector<cplx> terms;
  for (i64 n = n_lo; n <= n_hi; ++n)
    terms.push_back(A.A(m, n) * special::unit_root(n * dbar, c) * kernel.psi(static_cast<double>(n)));
  for (const auto& t : terms) out.lhs += t;
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) out.lhs_reversed += *it;

  const double c3m = static_cast<double>(c) * c * c * m;
  constexpr i64 kBlock = 250;
  for (i64 n1 : arith::divisors(c)) {
    const i64 q = c / n1;
    // S(md, ±n₂, q) depends on n₂ mod q only
    std::vector<double> s_plus(q), s_minus(q);
    for (i64 j = 0; j < q; ++j) {
      s_plus[j] = special::kloosterman(m * d, j, q);
      s_minus[j] = special::kloosterman(m * d, -j, q);
    }
    cplx sum = 0.0;
    double total_abs = 0.0, prev_block = 0.0, tail = 0.0;
    i64 n2 = 1;
    for (int block = 0;; ++block) {
      std::vector<cplx> vals(kBlock);
      numeric::parallel_for(kBlock, [&](std::size_t i) {
        const i64 nn = n2 + static_cast<i64>(i);
        const double x = static_cast<double>(nn) * n1 * n1 / c3m;
        const double a = A.A(nn, n1) / (static_cast<double>(nn) * n1);
        const auto j = static_cast<std::size_t>(nn % q);
        vals[i] = a * (s_plus[j] * kernel(x, 1) + s_minus[j] * kernel(x, -1));
      });
      double block_abs = 0.0;
      for (const auto& v : vals) {
        sum += v;
        block_abs += std::abs(v);
      }
      total_abs += block_abs;
      n2 += kBlock;
      out.dual_terms += kBlock;
      if (block >= 3 && prev_block > 0.0) {
        const double rho = block_abs / prev_block;
        if (rho < 0.9) {
          tail = block_abs * rho / (1.0 - rho);
          if (tail <= dual_target * total_abs) break;
        }
      }
      prev_block = block_abs;
      if (n2 + kBlock > A.row_limit()) {
        tail = block_abs * 10.0;  // no decay certificate available
        break;
      }
    }
    out.rhs += sum;
    out.dual_tail += tail * static_cast<double>(c);
  }
  out.rhs *= static_cast<double>(c);
  return out;
}

CharSum twisted_kloosterman_sum(i64 r, i64 m, i64 n2, i64 c, i64 n1, int sign) {
  if (c < 1 || n1 < 1 || c % n1 != 0) throw DomainError("character sum: n1 must divide c");
  const i64 q = c / n1, b = sign >= 0 ? n2 : -n2;
  CharSum out;
  for (i64 d = 0; d < c; ++d)
    if (std::gcd(d, c) == 1) out.exact += special::unit_root(d * r, c) * special::kloosterman(m * d, b, q);
  for (i64 h = 0; h < q; ++h) {
    if (std::gcd(h, q) != 1) continue;
    const i64 hbar = q == 1 ? 0 : arith::mod_inverse(h, q);
    out.ramanujan += special::unit_root(b * hbar, q) *
                     static_cast<double>(special::ramanujan_sum(r + m * h * n1, c));
  }
  out.bound = static_cast<double>(arith::divisor_count(c) * c * std::gcd(c, m));
  out.ok = std::abs(out.exact) <= out.bound * (1.0 + 1e-12);
  return out;
}

CharSumGrid twisted_kloosterman_grid(i64 c_max, i64 v_max) {
  std::vector<CharSumGrid> per_c(static_cast<std::size_t>(c_max));
  numeric::parallel_for(per_c.size(), [&](std::size_t i) {
    const i64 c = static_cast<i64>(i) + 1;
    auto& g = per_c[i];
    for (i64 n1 : arith::divisors(c))
      for (i64 m = 1; m <= v_max; ++m)
        for (i64 r = 1; r <= v_max; ++r)
          for (i64 n2 = 1; n2 <= v_max; ++n2)
            for (int sign : {1, -1}) {
              const auto s = twisted_kloosterman_sum(r, m, n2, c, n1, sign);
              ++g.cases;
              if (!s.ok) ++g.violations;
              g.max_route_difference = std::max(g.max_route_difference, std::abs(s.exact - s.ramanujan));
              g.max_ratio = std::max(g.max_ratio, std::abs(s.exact) / s.bound);
            }
  });
  CharSumGrid out;
  for (const auto& g : per_c) {
    out.cases += g.cases;
    out.violations += g.violations;
    out.max_route_difference = std::max(out.max_route_difference, g.max_route_difference);
    out.max_ratio = std::max(out.max_ratio, g.max_ratio);
  }
  return out;
}

}  // namespace cuspmass::verify
