#include "cuspmass/oscillatory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cuspmass/error.hpp"
#include "cuspmass/jet.hpp"
#include "cuspmass/numeric.hpp"

namespace cuspmass::osc {

namespace {

constexpr double kPi = std::numbers::pi;

double find_stationary_point(const WeightSpec& w, const PhaseSpec& h) {
  if (h.t0) return *h.t0;
  if (h.max_order < 1) throw DerivativeOrderError("stationary point search needs h'");
  const int samples = 4096;
  double a = w.alpha, fa = h.h(a, 1);
  for (int i = 1; i <= samples; ++i) {
    double b = w.alpha + (w.beta - w.alpha) * i / samples;
    const double fb = h.h(b, 1);
    if (fa == 0.0) return a;
    if ((fa < 0.0) != (fb < 0.0)) {
      for (int it = 0; it < 200 && b - a > 1e-15 * (1.0 + std::abs(a)); ++it) {
        const double m = 0.5 * (a + b), fm = h.h(m, 1);
        if ((fm < 0.0) == (fa < 0.0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      return 0.5 * (a + b);
    }
    a = b;
    fa = fb;
  }
  throw PreconditionError("no stationary point of h in the support; use ibp_bound instead");
}

Jet<cplx> to_complex(const Jet<double>& j) {
  Jet<cplx> r(j.order());
  for (std::size_t i = 0; i <= j.order(); ++i) r[i] = j[i];
  return r;
}

// G^{(2n)}(t0) for n = 0..n_max from the Taylor jets of w and h.
std::vector<cplx> g_derivatives_analytic(const WeightSpec& w, const PhaseSpec& h, double t0,
                                         int n_max) {
  const std::size_t ord = static_cast<std::size_t>(2 * n_max);
  std::vector<double> wd(ord + 1), hd(ord + 1);
  for (std::size_t j = 0; j <= ord; ++j) {
    wd[j] = w.w(t0, static_cast<int>(j));
    hd[j] = h.h(t0, static_cast<int>(j));
  }
  auto wJ = Jet<double>::from_derivatives(wd, ord);
  auto HJ = Jet<double>::from_derivatives(hd, ord);
  HJ[0] = 0.0;
  if (ord >= 2) HJ[2] = 0.0;
  auto G = to_complex(wJ) * exp(to_complex(HJ) * cplx(0.0, 1.0));
  std::vector<cplx> out;
  for (int n = 0; n <= n_max; ++n) out.push_back(G.derivative(static_cast<std::size_t>(2 * n)));
  return out;
}

std::vector<cplx> g_derivatives_fd(const WeightSpec& w, const PhaseSpec& h, double t0, int n_max,
                                   double step) {
  const double h0 = h.h(t0, 0);
  // h''(t0) from a 9-point central stencil unless an oracle exists
  double h2;
  if (h.max_order >= 2) {
    h2 = h.h(t0, 2);
  } else {
    std::vector<double> nodes;
    for (int j = -4; j <= 4; ++j) nodes.push_back(t0 + j * step);
    const auto c = fornberg_weights(t0, nodes, 2);
    h2 = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) h2 += c[i] * h.h(nodes[i], 0);
  }
  auto G = [&](double t) {
    const double d = t - t0;
    return w.w(t, 0) * std::polar(1.0, h.h(t, 0) - h0 - 0.5 * h2 * d * d);
  };
  std::vector<cplx> out;
  for (int n = 0; n <= n_max; ++n) {
    if (n == 0) {
      out.push_back(G(t0));
      continue;
    }
    const int p = n + 4;
    std::vector<double> nodes;
    for (int j = -p; j <= p; ++j) nodes.push_back(t0 + j * step);
    const auto c = fornberg_weights(t0, nodes, 2 * n);
    cplx s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += c[i] * G(nodes[i]);
    out.push_back(s);
  }
  return out;
}

// smooth step 0 → 1 on [0, 1] as a jet in v
Jet<double> smooth_step(const Jet<double>& v) {
  const auto one = Jet<double>(v.order(), 1.0);
  const auto a = exp(-(one / v));
  const auto b = exp(-(one / (one - v)));
  return a / (a + b);
}

}  // namespace

double scale_Z(const WeightSpec& w, const PhaseSpec& h) { return h.Q + w.X + h.Y + w.V1 + 1.0; }

double ibp_bound(const WeightSpec& w, const PhaseSpec& h, int A) {
  if (A < 0) throw DomainError("ibp_bound: A must be non-negative");
  const double base = (w.beta - w.alpha) * w.X;
  if (A == 0) return 2.0 * base;
  if (!h.R || !(*h.R > 0.0)) throw PreconditionError("ibp_bound: a positive lower bound R on |h'| is required");
  if (w.max_order < 2 * A || h.max_order < 2 * A)
    throw DerivativeOrderError("ibp_bound: derivative oracles of order " + std::to_string(2 * A) +
                               " are required");
  const double R = *h.R;
  return base * (std::pow(h.Q * R / std::sqrt(h.Y), -A) + std::pow(R * w.U, -A));
}

int default_term_count(double delta, int A) {
  return std::min(8, static_cast<int>(std::floor(3.0 * A / delta)));
}

StationaryPhaseResult stationary_phase_expand(const WeightSpec& w, const PhaseSpec& h, int N,
                                              double delta, int A, std::optional<double> V_opt) {
  if (N < 0) throw DomainError("stationary_phase_expand: N must be non-negative");
  if (h.max_order < 2 && !h.t0)
    throw DerivativeOrderError("stationary_phase_expand: h'' is required");
  const double t0 = find_stationary_point(w, h);
  if (!(t0 > w.alpha && t0 < w.beta))
    throw PreconditionError("stationary point is not interior to the support");
  StationaryPhaseResult out;
  out.t0 = t0;
  out.Z = scale_Z(w, h);
  const double Z = out.Z;
  const double V = V_opt.value_or(w.U);
  if (!(h.Y >= std::pow(Z, 3.0 * delta)))
    throw PreconditionError("hypothesis Y >= Z^{3 delta} fails");
  if (!(w.V1 >= V)) throw PreconditionError("hypothesis V1 >= V fails");
  if (!(V >= h.Q * std::pow(Z, 0.5 * delta) / std::sqrt(h.Y)))
    throw PreconditionError("hypothesis V >= Q Z^{delta/2} / Y^{1/2} fails");
  if (h.max_order >= 1 && std::abs(h.h(t0, 1)) > 1e-10 * h.Y / h.Q)
    throw PreconditionError("h'(t0) does not vanish at the supplied stationary point");
  const double h2 = h.max_order >= 2 ? h.h(t0, 2) : 0.0;
  if (!(h2 > 0.0)) throw PreconditionError("h''(t0) must be positive");

  const int n_max = N + 1;  // one extra term for the error estimate
  std::vector<cplx> gd;
  if (w.max_order >= 2 * n_max && h.max_order >= 2 * n_max) {
    gd = g_derivatives_analytic(w, h, t0, n_max);
  } else {
    out.analytic_derivatives = false;
    gd = g_derivatives_fd(w, h, t0, n_max, std::min(V, h.Q) / 100.0);
  }
  const cplx lead = std::sqrt(2.0 * kPi) * std::polar(1.0, kPi / 4.0);
  const cplx pref = std::polar(1.0, h.h(t0, 0)) / std::sqrt(h2);
  const cplx ratio = cplx(0.0, 1.0) / (2.0 * h2);
  cplx rp = 1.0;
  double fact = 1.0;
  std::vector<cplx> all;
  for (int n = 0; n <= n_max; ++n) {
    if (n > 0) {
      rp *= ratio;
      fact *= n;
    }
    all.push_back(pref * lead / fact * rp * gd[static_cast<std::size_t>(n)]);
  }
  out.terms.assign(all.begin(), all.begin() + N + 1);
  out.n_used = N;
  cplx sum = 0.0;
  for (int n = N; n >= 0; --n) sum += out.terms[static_cast<std::size_t>(n)];
  out.value = sum;
  out.error_estimate = std::abs(all.back()) + w.X * std::pow(Z, -A);
  for (int n = 0; n < N; ++n)
    if (!(std::abs(all[static_cast<std::size_t>(n + 1)]) < std::abs(all[static_cast<std::size_t>(n)])))
      out.terms_decreasing = false;
  return out;
}

double window_w0(double u) { return window_w0_derivative(u, 0); }

double window_w0_derivative(double u, int j) {
  const double a = std::abs(u);
  if (a >= 1.0) return 0.0;
  if (a <= 0.5) return j == 0 ? 1.0 : 0.0;
  const double sgn = u < 0.0 ? -1.0 : 1.0;
  Jet<double> v(static_cast<std::size_t>(j), 2.0 - 2.0 * a);
  if (j >= 1) v[1] = -2.0 * sgn;
  return smooth_step(v).derivative(static_cast<std::size_t>(j));
}

WeightSpec short_window(const WeightSpec& w, const PhaseSpec& h, double T, WindowCertificate* cert) {
  if (!(T > 0.0)) throw DomainError("short_window: T must be positive");
  const double t0 = find_stationary_point(w, h);
  WeightSpec out = w;
  const DerivativeOracle base = w.w;
  out.w = [base, t0, T](double t, int j) {
    const double u = (t - t0) / T;
    if (std::abs(u) >= 1.0) return 0.0;
    double s = 0.0, binom = 1.0, tp = 1.0;
    for (int i = j; i >= 0; --i) {
      // C(j, j-i) T^{-(j-i)} w0^{(j-i)} w^{(i)}
      s += binom * tp * window_w0_derivative(u, j - i) * base(t, i);
      binom = binom * i / (j - i + 1);
      tp /= T;
    }
    return s;
  };
  out.alpha = std::max(w.alpha, t0 - T);
  out.beta = std::min(w.beta, t0 + T);
  out.V1 = out.beta - out.alpha;
  out.U = std::min(w.U, 0.25 * T);
  if (cert) {
    WindowCertificate c;
    const double h2 = h.max_order >= 2 ? h.h(t0, 2) : 0.0;
    c.too_small = h2 * T * T < 1.0;
    if (c.too_small) c.note = "window narrower than the stationary neighbourhood (T^2 h'' < 1)";
    double R = 1e300;
    const int samples = 2000;
    auto scan = [&](double a, double b) {
      if (!(b > a)) return;
      for (int i = 0; i <= samples; ++i) R = std::min(R, std::abs(h.h(a + (b - a) * i / samples, 1)));
    };
    scan(w.alpha, std::min(w.beta, t0 - 0.5 * T));
    scan(std::max(w.alpha, t0 + 0.5 * T), w.beta);
    c.R = R;
    WeightSpec comp = w;
    comp.U = std::min(w.U, 0.25 * T);
    PhaseSpec hc = h;
    hc.R = R;
    const int A = std::max(0, std::min({4, w.max_order / 2, h.max_order / 2}));
    c.complement_bound = R > 0.0 && R < 1e299 ? ibp_bound(comp, hc, A) : 0.0;
    *cert = c;
  }
  return out;
}

cplx oscillatory_quadrature(const WeightSpec& w, const PhaseSpec& h, double tol, QuadratureInfo* info) {
  if (!(w.beta > w.alpha)) throw DomainError("oscillatory_quadrature: empty support");
  const auto& g = numeric::gauss_legendre(20);
  auto hprime = [&](double t) {
    if (h.max_order >= 1) return std::abs(h.h(t, 1));
    const double e = 1e-6 * (1.0 + std::abs(t));
    return std::abs(h.h(t + e, 0) - h.h(t - e, 0)) / (2.0 * e);
  };
  // initial panels: width · |h'| ≤ π
  std::vector<std::pair<double, double>> panels;
  {
    std::vector<std::pair<double, double>> stack{{w.alpha, w.beta}};
    while (!stack.empty()) {
      auto [a, b] = stack.back();
      stack.pop_back();
      const double m = 0.5 * (a + b);
      const double slope = std::max({hprime(a), hprime(m), hprime(b)});
      if ((b - a) * slope > kPi && b - a > 1e-12 * (w.beta - w.alpha)) {
        stack.push_back({m, b});
        stack.push_back({a, m});
      } else {
        panels.push_back({a, b});
      }
    }
    std::sort(panels.begin(), panels.end());
  }
  struct Panel { cplx value; double magnitude; };  // ∫ w e^{ih}, ∫ |w| (1 + |h|)
  auto rule = [&](double a, double b) {
    const double hw = 0.5 * (b - a), mid = 0.5 * (a + b);
    cplx s = 0.0;
    double m = 0.0;
    for (std::size_t j = 0; j < g.nodes.size(); ++j) {
      const double t = mid + hw * g.nodes[j];
      const double wt = w.w(t, 0), ht = h.h(t, 0);
      s += g.weights[j] * wt * std::polar(1.0, ht);
      m += g.weights[j] * std::abs(wt) * (1.0 + std::abs(ht));
    }
    return Panel{hw * s, hw * m};
  };
  const double span = w.beta - w.alpha;
  std::vector<cplx> vals(panels.size());
  std::vector<double> errs(panels.size());
  std::vector<std::size_t> evals(panels.size());
  numeric::parallel_for(panels.size(), [&](std::size_t p) {
    struct Item { double a, b; Panel whole; int depth; };
    const auto [a0, b0] = panels[p];
    std::vector<Item> stack{{a0, b0, rule(a0, b0), 0}};
    cplx acc = 0.0;
    double err = 0.0;
    std::size_t ev = 20;
    while (!stack.empty()) {
      Item it = stack.back();
      stack.pop_back();
      const double m = 0.5 * (it.a + it.b);
      const Panel left = rule(it.a, m), right = rule(m, it.b);
      ev += 40;
      const double diff = std::abs(left.value + right.value - it.whole.value);
      // accept at the requested share of tol or at the rounding level of the phase
      const double floor_ = 64.0 * 2.2e-16 * (left.magnitude + right.magnitude);
      if (diff <= std::max(tol * (it.b - it.a) / span, floor_)) {
        acc += left.value + right.value;
        err += diff;
      } else if (it.depth >= 40) {
        throw RefinementError("oscillatory_quadrature: refinement limit reached near t = " +
                              std::to_string(m));
      } else {
        stack.push_back({m, it.b, right, it.depth + 1});
        stack.push_back({it.a, m, left, it.depth + 1});
      }
    }
    vals[p] = acc;
    errs[p] = err;
    evals[p] = ev;
  });
  if (info) {
    info->panels = panels.size();
    info->error_estimate = numeric::pairwise_sum(errs);
    info->evaluations = 0;
    for (auto e : evals) info->evaluations += e;
  }
  return numeric::pairwise_sum(vals);
}

std::vector<double> fornberg_weights(double x0, const std::vector<double>& x, int m) {
  const int n = static_cast<int>(x.size()) - 1;
  if (m > n) throw DerivativeOrderError("fornberg_weights: stencil too small for the derivative order");
  std::vector<std::vector<double>> c(static_cast<std::size_t>(n + 1),
                                     std::vector<double>(static_cast<std::size_t>(m + 1), 0.0));
  double c1 = 1.0, c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[static_cast<std::size_t>(i)] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> out;
  for (int i = 0; i <= n; ++i) out.push_back(c[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)]);
  return out;
}

GaussianCase quadratic_gaussian_case(double lambda) {
  if (!(lambda > 0.0)) throw PreconditionError("quadratic_gaussian_case: λ must be positive");
  const WeightSpec g{[](double t, int j) {
                       const auto u = Jet<double>::variable(j, t - 3.0);
                       return exp(-(u * u)).derivative(j);
                     },
                     40, -4.0, 10.0, 1.0, 1.0, 14.0};
  const PhaseSpec h{[lambda](double t, int j) {
                      const double d = t - 3.0;
                      switch (j) {
                        case 0: return 0.5 * lambda * d * d;
                        case 1: return lambda * d;
                        case 2: return lambda;
                        default: return 0.0;
                      }
                    },
                    40, lambda, 1.0, std::nullopt, 3.0};
  GaussianCase out{short_window(g, h, 7.0), h, 0.0};
  out.closed_form = std::sqrt(std::numbers::pi / cplx(1.0, -0.5 * lambda));
  return out;
}

}  // namespace cuspmass::osc
