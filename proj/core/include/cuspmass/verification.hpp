#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cuspmass/eigenform.hpp"
#include "cuspmass/lvalues.hpp"

namespace cuspmass::verify {

using cplx = std::complex<double>;
using i64 = std::int64_t;
using Json = nlohmann::ordered_json;

inline constexpr double kResidualFloor = 1e-30;

struct Tolerance {
  double value = 1e-6;
  bool absolute = false;  // compare abs_residual instead of rel_residual
};

/// Declared tolerance per identity; overridable at run time.
class ToleranceTable {
 public:
  ToleranceTable();
  const Tolerance& get(const std::string& identity) const;
  void set(const std::string& identity, double value);
  bool contains(const std::string& identity) const { return table_.count(identity) != 0; }
  const std::map<std::string, Tolerance>& entries() const { return table_; }

 private:
  std::map<std::string, Tolerance> table_;
};

struct CheckReport {
  std::string identity;
  Json params = Json::object();
  cplx lhs = 0.0;
  cplx rhs = 0.0;
  bool complex_valued = false;
  double abs_residual = 0.0;
  double rel_residual = 0.0;
  Tolerance tolerance;
  Json truncation = Json::object();
  bool passed = false;

  Json to_json() const;
  std::string to_json_line() const;
};

/// Fills the residuals and the pass flag from lhs, rhs and the tolerance.
CheckReport make_report(std::string identity, Json params, cplx lhs, cplx rhs,
                        const Tolerance& tol, Json truncation = Json::object(),
                        bool complex_valued = false);

/// Sorts by identity, then by the serialized parameters.
void sort_reports(std::vector<CheckReport>& reports);

/// Shared inputs for the checks: eigen data source and tolerances.
struct SuiteContext {
  eigen::EigenOptions eigen;
  i64 prime_limit = 80000;
  ToleranceTable tolerances;

  eigen::EigenBasis basis(int k) const;
};

// ------------------------------------------------------------ Petersson

/// Smallest C with the Bessel tail Σ_{c>C} |J_{k-1}(4π√(mn)/c)| ≤ target.
i64 petersson_c_max(int k, i64 m, i64 n, double target = 1e-12);

/// Spectral side (ζ(2)/((k-1)/12)) Σ_g λ_g(n)λ_g(m)/L(1, sym² g) against
/// δ + 2π i^{-k} Σ_{c ≤ c_max} S(m, n, c)/c J_{k-1}(4π√(mn)/c).
CheckReport petersson_check(const SuiteContext& ctx, int k, i64 m, i64 n, i64 c_max = 0);

// ------------------------------------------------------------ fourth moment

struct WatsonL4Result {
  double quadrature = 0.0;  // ∫ |F|⁴ dμ
  double spectral = 0.0;    // Σ_g ⟨F², G⟩²
  double lvalue = 0.0;      // L-value expression summed over B_{2k}
  std::vector<double> inner_products;
  std::vector<double> per_g_lvalue;  // Watson's right-hand side for each g
  std::vector<int> root_signs;
  std::vector<CheckReport> reports;
};

WatsonL4Result watson_l4_check(const SuiteContext& ctx, int k);

// ------------------------------------------------------------ cusp identities

CheckReport cusp_P_check(const SuiteContext& ctx, int k, double y0);
CheckReport geodesic_R_check(const SuiteContext& ctx, int k, double y0);
/// Pairwise comparisons of the direct, moment and spectral evaluations of 𝓘.
std::vector<CheckReport> geodesic_I_check(const SuiteContext& ctx, int k);

// ------------------------------------------------------------ GL(3) Voronoi

/// Ω₂(t) = exp(4 - 1/((t-1)(2-t))) on (1, 2), zero elsewhere; Ω₂(3/2) = 1.
double omega2(double t);

/// G^±(s) for the symmetric-square lift of a weight-k form; sign = ±1.
cplx voronoi_G(int k, cplx s, int sign);

struct VoronoiSetup {
  int k = 12;
  int kappa = 12;
  double N = 200.0;
  i64 c = 1;
  i64 r = 1;
  double sigma = -0.5;        // contour abscissa, any value in (-1, ∞)
  double dt = 0.05;           // trapezoid step along the contour
  double mellin_tail = 1e-12; // |ψ̃| cutoff relative to its peak
};

/// Ψ^±(x) = (1/2π^{3/2}) ∫_(σ) (π³x)^{-s} G^±(s) ψ̃(-s) ds/2πi for
/// ψ(y) = Ω₂(y/N) J_{2κ-1}(4π√(yr)/c). G^± and ψ̃ are tabulated once.
class VoronoiKernel {
 public:
  explicit VoronoiKernel(const VoronoiSetup& setup);

  const VoronoiSetup& setup() const { return setup_; }
  double psi(double y) const;
  /// ψ̃(w) = ∫ ψ(y) y^{w-1} dy by the trapezoid rule in log y.
  cplx psi_mellin(cplx w) const;
  cplx operator()(double x, int sign) const;

  double t_max() const { return t_max_; }
  double mellin_tail_ratio() const { return tail_ratio_; }
  std::size_t log_nodes() const { return u_.size(); }
  /// X = N^{1/2} r^{3/2} / c³, the scale beyond which Ψ^± decays.
  double decay_scale() const;
  /// (x^{1/2} c / r^{1/2} + x c² / r) (1 + x/X)^{-A}, without implied constants.
  double shape_bound(double x, int A = 2) const;

 private:
  VoronoiSetup setup_;
  double t_max_ = 0.0;
  double tail_ratio_ = 0.0;
  double hu_ = 0.0;
  std::vector<double> u_, psi_u_;
  std::vector<cplx> q_plus_, q_minus_;  // G^±(s_j) ψ̃(-s_j) on the contour grid
};

cplx voronoi_psi_kernel(int k, int kappa, double N, i64 c, i64 r, double x, int sign);

struct VoronoiSides {
  cplx lhs = 0.0;
  cplx lhs_reversed = 0.0;
  cplx rhs = 0.0;
  i64 dual_terms = 0;
  double dual_tail = 0.0;
};

/// Both sides of the GL(3) Voronoi formula with m = r; gcd(d, c) = 1.
VoronoiSides voronoi_sides(const eigen::SymSquareCoefficients& A, const VoronoiKernel& kernel,
                           i64 d, double dual_target = 1e-9);

CheckReport voronoi_check(const SuiteContext& ctx, int k, i64 c, i64 d, double N, i64 r,
                          int kappa = 0);

/// Kernel self-checks at x ∈ {X/4, X, 4X}: Ψ⁺ on the abscissae σ and σ - 1/4
/// ("voronoi_contour_shift") and Ψ⁺ against the conjugate of Ψ⁻ ("voronoi_conjugacy").
std::vector<CheckReport> voronoi_kernel_checks(const SuiteContext& ctx, const VoronoiSetup& setup);

// ------------------------------------------------------------ character sums

struct CharSum {
  cplx exact = 0.0;      // Σ*_{d mod c} e(dr/c) S(md, ±n₂, c/n₁)
  cplx ramanujan = 0.0;  // Σ*_{h mod c/n₁} e(±n₂h̄/(c/n₁)) r_c(r + mhn₁)
  double bound = 0.0;    // τ(c) c (c, m)
  bool ok = false;
};

/// Throws DomainError unless n₁ | c.
CharSum twisted_kloosterman_sum(i64 r, i64 m, i64 n2, i64 c, i64 n1, int sign = 1);

struct CharSumGrid {
  i64 cases = 0;
  i64 violations = 0;
  double max_route_difference = 0.0;
  double max_ratio = 0.0;  // max |exact| / bound
};

/// All c ≤ c_max, n₁ | c, 1 ≤ m, r, n₂ ≤ v_max and both signs.
CharSumGrid twisted_kloosterman_grid(i64 c_max = 60, i64 v_max = 8);

// ------------------------------------------------------------ mean value

struct MeanValueRow {
  int k = 0;
  int kappa = 0;
  i64 r = 1;
  double M = 0.0;
  double M_diag = 0.0;
  double M_offdiag = 0.0;
  bool forced_zero = false;
};

std::vector<MeanValueRow> mean_value_report(const SuiteContext& ctx, int k,
                                            const std::vector<int>& kappas,
                                            const std::vector<i64>& r_list);

// ------------------------------------------------------------ suite

struct SuiteOptions {
  std::vector<std::string> identities;  // empty selects all
  std::vector<int> weights{12};
};

/// Every identity name the suite knows, in report order.
std::vector<std::string> suite_identities();

/// Runs the selected checks in parallel; reports come back sorted.
std::vector<CheckReport> run_suite(const SuiteContext& ctx, const SuiteOptions& options);

}  // namespace cuspmass::verify
