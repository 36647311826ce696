#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace cuspmass::osc {

using cplx = std::complex<double>;
/// f^{(j)}(t); j = 0 is the value.
using DerivativeOracle = std::function<double(double t, int j)>;

struct WeightSpec {
  DerivativeOracle w;
  int max_order = 0;  // highest derivative the oracle provides
  double alpha = 0.0, beta = 1.0;
  double X = 1.0;     // size
  double U = 1.0;     // flatness scale: w^{(j)} ≪ X U^{-j}
  double V1 = 1.0;    // support length

  double operator()(double t) const { return w(t, 0); }
};

struct PhaseSpec {
  DerivativeOracle h;
  int max_order = 0;
  double Y = 1.0;  // h^{(j)} ≪ Y Q^{-j}
  double Q = 1.0;
  std::optional<double> R;   // lower bound for |h'| on the support
  std::optional<double> t0;  // stationary point

  double operator()(double t) const { return h(t, 0); }
};

struct StationaryPhaseResult {
  cplx value;
  std::vector<cplx> terms;  // e^{ih(t0)} h''(t0)^{-1/2} p_n(t0), n = 0..N
  int n_used = 0;
  double error_estimate = 0.0;
  double Z = 0.0;
  double t0 = 0.0;
  bool analytic_derivatives = true;
  bool terms_decreasing = true;
};

/// (β-α) X [(QR/√Y)^{-A} + (RU)^{-A}]; implied constants set to 1.
double ibp_bound(const WeightSpec& w, const PhaseSpec& h, int A);

/// Z = Q + X + Y + V1 + 1.
double scale_Z(const WeightSpec& w, const PhaseSpec& h);

/// e^{ih(t0)} h''(t0)^{-1/2} Σ_{n ≤ N} p_n(t0) with
/// p_n = √(2π) e^{iπ/4}/n! (i/(2h''(t0)))ⁿ G^{(2n)}(t0), G = w e^{iH},
/// H(t) = h(t) - h(t0) - h''(t0)(t-t0)²/2.
/// `V` is the flatness parameter of the hypotheses (defaults to w.U).
StationaryPhaseResult stationary_phase_expand(const WeightSpec& w, const PhaseSpec& h, int N,
                                              double delta = 0.05, int A = 2,
                                              std::optional<double> V = std::nullopt);

/// Default term count min(8, ⌊3A/δ⌋).
int default_term_count(double delta = 0.05, int A = 2);

/// Smooth bump: 1 on [-1/2, 1/2], 0 outside (-1, 1).
double window_w0(double u);
/// j-th derivative of window_w0.
double window_w0_derivative(double u, int j);

struct WindowCertificate {
  double complement_bound = 0.0;  // ibp_bound on the complement
  double R = 0.0;                 // |h'| lower bound used on the complement
  bool too_small = false;         // T²h''(t0) below 1
  std::string note;
};

/// w(t) w₀((t - t0)/T) together with the complement certificate.
WeightSpec short_window(const WeightSpec& w, const PhaseSpec& h, double T,
                        WindowCertificate* cert = nullptr);

struct QuadratureInfo {
  double error_estimate = 0.0;
  std::size_t panels = 0;
  std::size_t evaluations = 0;
};

/// ∫_α^β w e^{ih}: panels no wider than a fraction of the local period,
/// Gauss rules compared against split panels until the tolerance is met.
cplx oscillatory_quadrature(const WeightSpec& w, const PhaseSpec& h, double tol,
                            QuadratureInfo* info = nullptr);

/// Test family w(t) = e^{-(t-3)²} w₀((t-3)/7), h(t) = λ(t-3)²/2 on [-4, 10],
/// approximating √(π/(1 - iλ/2)). The window only touches the region where the
/// Gaussian is below e^{-12}, and there the phase is non-stationary, so the
/// defect decays rapidly in λ (below 1e-15 for λ ≥ 50).
struct GaussianCase {
  WeightSpec w;
  PhaseSpec h;
  cplx closed_form;
};
GaussianCase quadratic_gaussian_case(double lambda);

/// Fornberg finite-difference weights for the m-th derivative at x0.
std::vector<double> fornberg_weights(double x0, const std::vector<double>& nodes, int m);

}  // namespace cuspmass::osc
