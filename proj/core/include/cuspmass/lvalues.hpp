#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "cuspmass/eigenform.hpp"
#include "cuspmass/sym_square.hpp"

namespace cuspmass::lvalues {

using cplx = std::complex<double>;
using i64 = std::int64_t;
using eigen::HeckeEigenform;

enum class Branch { KappaAtLeastK, KappaBelowK };

/// Archimedean factor of L(s, sym² f × g) with f of weight k and g of weight 2κ.
struct GammaFactorSpec {
  int k = 12;
  int kappa = 12;

  Branch branch() const { return kappa >= k ? Branch::KappaAtLeastK : Branch::KappaBelowK; }
  /// a_j in Λ(s) = (2π)^{-3s} Π Γ(s + a_j).
  std::vector<double> shifts() const;
};

struct GammaValue {
  double log_modulus = 0.0;
  double phase = 0.0;
  cplx value;                 // exp(log_modulus + i phase) when representable
  bool representable = false;
};

/// log Λ_{k,κ}(s); throws PoleError at poles of the gamma factors.
cplx log_gamma_factor(const GammaFactorSpec& spec, cplx s);
GammaValue gamma_factor(const GammaFactorSpec& spec, cplx s);

/// +1 iff (κ ≥ k and κ even) or (κ < k and κ odd).
int root_number(int k, int kappa);

struct ContourNodes {
  double abscissa = 1.0;
  double h = 0.05;
  std::vector<double> t;
  std::vector<double> log_re;  // Re log g(t_j)
  std::vector<double> log_im;  // Im log g(t_j)
  double log_peak = 0.0;
};

/// W(x) = (1/2πi) ∫_(c) Λ(1/2+s)/Λ(1/2) cos(πs/(10A))^{-60A} x^{-s} ds/s.
///
/// Each evaluation picks the abscissa that minimises the size of the integrand
/// (saddle heuristic) and uses a trapezoid rule in t on cached node sets.
/// For x < 1 the line Re s = -1/2 is used and the residue at s = 0 is added.
class CutoffW {
 public:
  explicit CutoffW(GammaFactorSpec spec, int A = 16);

  const GammaFactorSpec& spec() const { return spec_; }
  int A() const { return A_; }

  double operator()(double x) const { return value(x); }
  double value(double x) const;
  /// x W'(x).
  double x_derivative(double x) const;
  /// Evaluation on a prescribed abscissa (c ≠ 0, c > -1); the residue at s = 0
  /// is included when c < 0.
  double value_on(double x, double abscissa) const;
  /// W(n) for n = 0..n_max (entry 0 unused); memoized.
  const std::vector<double>& integer_table(i64 n_max) const;

  const ContourNodes& nodes(double abscissa) const;

 private:
  cplx log_integrand(cplx s) const;
  double evaluate(double x, double abscissa, bool derivative) const;
  double pick_abscissa(double x) const;

  GammaFactorSpec spec_;
  int A_;
  int max_abscissa_;
  std::vector<double> phi0_;  // Re log g(c, 0) for c = 1..max_abscissa_
  cplx log_lambda_half_;
  mutable std::mutex mu_;
  mutable std::map<double, std::unique_ptr<ContourNodes>> node_cache_;
  mutable std::vector<double> table_;
};

double cutoff_W(const CutoffW& W, double x);

struct Sym2L1 {
  double value = 0.0;
  double stability = 0.0;  // |value(X) - value(X/2)|
  double raw = 0.0;        // the smoothed sum alone, without residue terms
  double X = 0.0;
};

/// Smoothed Σ λ(d₁²)/(d₁d₂²) exp(-d₁d₂²/X), truncated at d₁d₂² ≤ 39X.
double L_sym2_smoothed_sum(const HeckeEigenform& f, double X);
/// L(1, sym² f) from the smoothed sum plus the residues at the negative
/// integers (functional equation), with a two-scale stability estimate.
Sym2L1 L_sym2_at_1(const HeckeEigenform& f, double X = 2000.0);
/// ζ(2s) Σ_{n ≤ n_max} λ(n²) n^{-s} for real s > 1.
double L_sym2_dirichlet(const HeckeEigenform& f, double s, i64 n_max);

struct CentralValue {
  double value = 0.0;
  bool forced_zero = false;  // odd functional equation
  i64 terms = 0;
  double tail_bound = 0.0;
};

/// L(1/2, g) = 2 Σ λ_g(n) n^{-1/2} Q(κ, 2πn) for g of weight 2κ; `terms` = 0
/// picks the truncation automatically.
CentralValue L_half_g(const HeckeEigenform& g, i64 terms = 0);

enum class SumOrder { MOuter, NOuter };

/// L(1/2, sym² f × g) = 2 Σ_{nm² ≤ C_W k²} λ_g(n) A(m,n) n^{-1/2} m^{-1} W(nm²).
CentralValue L_half_sym2f_g(const eigen::SymSquareCoefficients& A, const HeckeEigenform& g,
                            const CutoffW& W, double C_W = 20.0,
                            SumOrder order = SumOrder::MOuter);

struct MeanValue {
  double M = 0.0;
  double M_diag = 0.0;
  double M_offdiag = 0.0;
  bool forced_zero = false;
  std::vector<double> central_values;  // L(1/2, sym² f × g) per g
};

/// 𝓜_f(r) = 12/(2κ-1) Σ_{g ∈ B_{2κ}} λ_g(r) L(1/2, sym² f × g)/L(1, sym² g),
/// with the diagonal term evaluated independently.
MeanValue mean_value_M(const eigen::SymSquareCoefficients& A, i64 r,
                       const eigen::EigenBasis& basis_2kappa, const CutoffW& W,
                       double C_W = 20.0);

/// Diagonal term (2/ζ(2)) Σ_m A(m,r) r^{-1/2} m^{-1} W(rm²).
double mean_value_diag(const eigen::SymSquareCoefficients& A, i64 r, const CutoffW& W,
                       double C_W = 20.0);

struct OffDiagonal {
  double value = 0.0;
  i64 c_max = 0;
  i64 n_max = 0;
};

/// Off-diagonal term through the Kloosterman/Bessel side of the Petersson
/// formula for weight 2κ.
OffDiagonal mean_value_offdiag_kloosterman(const eigen::SymSquareCoefficients& A, i64 r,
                                           const CutoffW& W, double C_W = 20.0);

/// Γ(k/2 + it) L(1/2 + it, f) / Γ(k/2), computed from the incomplete-gamma
/// form of the functional equation.
cplx gamma_weighted_L(const HeckeEigenform& f, double t);

}  // namespace cuspmass::lvalues
