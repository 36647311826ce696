#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "cuspmass/eigenform.hpp"

namespace cuspmass::mass {

using cplx = std::complex<double>;
using i64 = std::int64_t;
using eigen::HeckeEigenform;

/// F(z) = y^{k/2} f(z) with f = a_f(1) Σ λ(n) (4πn)^{(k-1)/2} e(nz), so that
/// ∫ |F|² dx dy / y² = 1 over the fundamental domain.
class FormEvaluator {
 public:
  /// Keeps a reference; `f` must outlive the evaluator.
  explicit FormEvaluator(const HeckeEigenform& f);

  const HeckeEigenform& form() const { return *f_; }
  int weight() const { return k_; }
  /// Terms needed at height y for a relative tail below 1e-14.
  int required_terms(double y) const;
  /// n_terms = 0 selects required_terms(Im z); fewer than required throws
  /// TailBoundError with the required count.
  cplx operator()(cplx z, int n_terms = 0) const;
  /// Values along a row of x-points at fixed height y.
  void row(double y, const std::vector<double>& xs, std::vector<cplx>& out) const;

 private:
  void coefficients(double y, int n, std::vector<double>& b) const;

  const HeckeEigenform* f_;
  int k_;
  double log_a1_;
};

cplx evaluate_F(const HeckeEigenform& f, cplx z, int n_terms = 0);

/// Tensor-product quadrature on the standard fundamental domain, truncated at
/// y_max: periodic trapezoid in x × Gauss panels in y for y ≥ 1, and a Gauss
/// rule mapped exactly onto the region between the unit arc and y = 1.
struct FundamentalDomainGrid {
  double y_max = 0.0;
  int nx = 128;         // trapezoid points in x for y ≥ 1
  int ny = 24;          // Gauss order per y panel
  double panel = 0.5;   // y panel width
  int arc_order = 32;   // Gauss order in each direction below y = 1
  std::string rule = "trapezoid-x/gauss-y/arc-gauss";

  static FundamentalDomainGrid for_weight(int k, double refine = 1.0);
  FundamentalDomainGrid refined(double factor) const;
};

struct DomainNodes {
  std::vector<cplx> z;
  std::vector<double> w;  // includes 1/y² and the x-symmetry factor
};

/// Nodes for ∫ g dμ, dμ = dx dy / y², valid for integrands even under x ↦ -x.
DomainNodes domain_nodes(const FundamentalDomainGrid& grid);
/// Σ w_j: equals π/3 - 1/y_max up to rounding.
double domain_area(const FundamentalDomainGrid& grid);

struct QuadratureValue {
  double value = 0.0;
  double est_error = 0.0;  // refinement difference plus cusp tail
  double tail = 0.0;
};

/// (∫ |F|^p (3/π) dμ)^{1/p} with F rescaled to unit probability-measure mass.
QuadratureValue lp_norm(const HeckeEigenform& f, double p, const FundamentalDomainGrid& grid);
QuadratureValue lp_norm(const HeckeEigenform& f, double p);

/// ∫ |F|⁴ dμ for the dμ-normalized F.
QuadratureValue l4_integral(const HeckeEigenform& f);

/// ⟨F², G⟩ = ∫ F² Ḡ dμ for every G in `basis` (weight 2k), sharing one grid.
std::vector<double> inner_products_F2_G(const HeckeEigenform& f, const eigen::EigenBasis& basis);

// ------------------------------------------------------------ cusp integrals

/// P(y₀) = ∫_{y₀}^∞ ∫_{-1/2}^{1/2} |F|⁴ dx dy / y² by quadrature.
double cusp_integral_P(const HeckeEigenform& f, double y0);
/// Coefficient-sum form π^{5/2} Γ(k-1/2)/(Γ(k) L²) Σ_l T(l)²/l Q(2k-1, 4πy₀l);
/// l_max = 0 picks the Q-cutoff automatically.
double cusp_integral_P_sum(const HeckeEigenform& f, double y0, i64 l_max = 0);
/// Main term with Q replaced by 1 on l ≤ k/(2πy₀) and S in place of T.
double cusp_integral_P_main(const HeckeEigenform& f, double y0);

/// R(y₀) = ∫_{y₀}^∞ |F(iy)|² dy/y by quadrature.
double geodesic_R(const HeckeEigenform& f, double y0);
/// (π/L) Σ_l T(l)/l Q(k, 2πy₀l).
double geodesic_R_sum(const HeckeEigenform& f, double y0, i64 l_max = 0);

enum class GeodesicMethod { Direct, Moment, Spectral };

struct GeodesicValue {
  double value = 0.0;
  double est_error = 0.0;
};

/// 𝓘 = ∫_0^∞ |F(iy)|² dy/y. The spectral route needs B_{2k}.
GeodesicValue geodesic_I(const HeckeEigenform& f, GeodesicMethod method,
                         const eigen::EigenBasis* basis_2k = nullptr);

// ------------------------------------------------------------ shifted sums

/// T_f(l) = Σ_{m+n=l} λ(m)λ(n) (2√(mn)/l)^{k-1}.
double shifted_T(const HeckeEigenform& f, i64 l);
/// S_f(l) = Σ_{m+n=l} λ(m)λ(n) exp(-(m-n)² k / (2l²)).
double shifted_S(const HeckeEigenform& f, i64 l);

struct ShiftedConvolutionTable {
  int k = 0;
  std::vector<double> T;  // index l, entries 0 and 1 are zero
  std::vector<double> S;

  static ShiftedConvolutionTable build(const HeckeEigenform& f, i64 l_max);
  /// max_l |T(l)| / (l^ε (1 + l/√k)).
  double tbound_constant(double eps) const;
  /// max_l |T(l) - S(l)| / (l^{1+ε} k^{-3/2}).
  double approximation_constant(double eps) const;
};

/// ⟨f², P̃_l⟩ obtained by inverting T_f(l) = 2^{k-1}√(4πl)/(a₁²√Γ(2k-1)) ⟨f², P̃_l⟩.
double poincare_inner(const HeckeEigenform& f, i64 l);
/// The forward map, from an inner product back to T_f(l).
double poincare_to_T(const HeckeEigenform& f, i64 l, double inner);

}  // namespace cuspmass::mass
