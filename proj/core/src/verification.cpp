#include "cuspmass/verification.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "cuspmass/error.hpp"
#include "cuspmass/mass.hpp"
#include "cuspmass/numeric.hpp"
#include "cuspmass/special.hpp"
#include "cuspmass/sym_square.hpp"

namespace cuspmass::verify {

namespace {

constexpr double kPi = std::numbers::pi;

Json number(cplx z, bool complex_valued) {
  if (!complex_valued) return z.real();
  return Json::array({z.real(), z.imag()});
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

ToleranceTable::ToleranceTable() {
  table_ = {
      {"petersson", {1e-6, true}},
      {"l4_quadrature_vs_spectral", {1e-3, false}},
      {"l4_spectral_vs_lvalue", {1e-2, false}},
      {"l4_quadrature_vs_lvalue", {1e-2, false}},
      {"watson_per_form", {1e-2, false}},
      {"cusp_P", {1e-6, false}},
      {"geodesic_R", {1e-6, false}},
      {"geodesic_I", {1e-3, false}},
      {"voronoi", {1e-3, false}},
      {"voronoi_contour_shift", {1e-6, false}},
      {"voronoi_conjugacy", {1e-10, true}},
      {"char_sum_routes", {1e-10, true}},
      {"char_sum_bound", {0.0, true}},
  };
}

const Tolerance& ToleranceTable::get(const std::string& identity) const {
  const auto it = table_.find(identity);
  if (it == table_.end()) throw ConfigError("no tolerance declared for identity '" + identity + "'");
  return it->second;
}

void ToleranceTable::set(const std::string& identity, double value) {
  const auto it = table_.find(identity);
  if (it == table_.end()) throw ConfigError("unknown identity '" + identity + "'");
  if (!(value >= 0.0)) throw ConfigError("tolerance must be non-negative");
  it->second.value = value;
}

Json CheckReport::to_json() const {
  Json j;
  j["identity"] = identity;
  j["params"] = params;
  j["lhs"] = number(lhs, complex_valued);
  j["rhs"] = number(rhs, complex_valued);
  j["abs_residual"] = abs_residual;
  j["rel_residual"] = rel_residual;
  j["tolerance"] = tolerance.value;
  j["tolerance_kind"] = tolerance.absolute ? "absolute" : "relative";
  j["truncation"] = truncation;
  j["passed"] = passed;
  return j;
}

std::string CheckReport::to_json_line() const { return to_json().dump(); }

CheckReport make_report(std::string identity, Json params, cplx lhs, cplx rhs,
                        const Tolerance& tol, Json truncation, bool complex_valued) {
  CheckReport r;
  r.identity = std::move(identity);
  r.params = std::move(params);
  r.lhs = lhs;
  r.rhs = rhs;
  r.complex_valued = complex_valued;
  r.abs_residual = std::abs(lhs - rhs);
  r.rel_residual = r.abs_residual / std::max({std::abs(lhs), std::abs(rhs), kResidualFloor});
  r.tolerance = tol;
  r.truncation = std::move(truncation);
  r.passed = (tol.absolute ? r.abs_residual : r.rel_residual) <= tol.value;
  return r;
}

void sort_reports(std::vector<CheckReport>& reports) {
  std::stable_sort(reports.begin(), reports.end(), [](const CheckReport& a, const CheckReport& b) {
    if (a.identity != b.identity) return a.identity < b.identity;
    return a.params.dump() < b.params.dump();
  });
}

eigen::EigenBasis SuiteContext::basis(int k) const { return eigen::hecke_eigenbasis(k, prime_limit, eigen); }

// ------------------------------------------------------------ Petersson

i64 petersson_c_max(int k, i64 m, i64 n, double target) {
  // |J_ν(x)| ≤ (x/2)^ν / ν! and |S(m,n,c)| ≤ c, so the c-th term is at most
  // (2π√(mn))^{k-1} c^{1-k} / (k-1)!; the tail is bounded by an integral.
  const double nu = k - 1;
  const double logA = nu * std::log(2.0 * kPi * std::sqrt(static_cast<double>(m * n))) - std::lgamma(nu + 1.0);
  for (i64 C = 1;; ++C) {
    const double log_tail = logA - (nu - 1.0) * std::log(static_cast<double>(C)) - std::log(nu - 1.0);
    if (log_tail <= std::log(target)) return C;
    if (C > 10000000) throw ContourError("petersson_c_max: no admissible truncation");
  }
}

CheckReport petersson_check(const SuiteContext& ctx, int k, i64 m, i64 n, i64 c_max) {
  if (m < 1 || n < 1) throw DomainError("petersson_check: m, n must be positive");
  const auto B = ctx.basis(k);
  if (c_max <= 0) c_max = petersson_c_max(k, m, n);

  double spectral = 0.0;
  for (const auto& g : B) spectral += g->lambda(n) * g->lambda(m) / g->sym2_L1();
  spectral *= special::zeta(2.0) / ((k - 1) / 12.0);

  const double ik = (k % 4 == 0) ? 1.0 : -1.0;  // i^{-k} for even k
  const double z = 4.0 * kPi * std::sqrt(static_cast<double>(m * n));
  std::vector<double> terms(static_cast<std::size_t>(c_max));
  numeric::parallel_for(terms.size(), [&](std::size_t i) {
    const i64 c = static_cast<i64>(i) + 1;
    terms[i] = special::kloosterman(m, n, c) / static_cast<double>(c) *
               special::bessel_j(k - 1, z / static_cast<double>(c));
  });
  const double geometric = (m == n ? 1.0 : 0.0) + 2.0 * kPi * ik * numeric::pairwise_sum(terms);

  double sym2_spread = 0.0;
  for (const auto& g : B) sym2_spread = std::max(sym2_spread, g->sym2_L1_stability());
  Json params = {{"k", k}, {"m", m}, {"n", n}};
  Json trunc = {{"c_max", c_max}, {"sym2_L1_stability", sym2_spread}, {"prime_limit", ctx.prime_limit}};
  return make_report("petersson", params, spectral, geometric, ctx.tolerances.get("petersson"), trunc);
}

// ------------------------------------------------------------ fourth moment

WatsonL4Result watson_l4_check(const SuiteContext& ctx, int k) {
  const auto Bk = ctx.basis(k);
  const auto B2k = ctx.basis(2 * k);
  const auto& f = Bk.front();
  WatsonL4Result out;

  const auto quad = mass::l4_integral(*f);
  out.quadrature = quad.value;
  out.inner_products = mass::inner_products_F2_G(*f, B2k);
  for (double v : out.inner_products) out.spectral += v * v;

  const eigen::SymSquareCoefficients A(f, ctx.prime_limit);
  const lvalues::CutoffW W({k, k});
  const double L1f = f->sym2_L1();
  const double pref = kPi * kPi * kPi / (2.0 * (2 * k - 1));
  for (const auto& g : B2k) {
    const auto lg = lvalues::L_half_g(*g);
    const auto ls = lvalues::L_half_sym2f_g(A, *g, W);
    out.root_signs.push_back(lg.forced_zero || ls.forced_zero ? -1 : 1);
    const double rhs = pref * lg.value * ls.value / (L1f * L1f * g->sym2_L1());
    out.per_g_lvalue.push_back(rhs);
    out.lvalue += rhs;
  }

  const Json params = {{"k", k}};
  const Json qtrunc = {{"quadrature_error", quad.est_error}, {"cusp_tail", quad.tail}};
  const Json ltrunc = {{"cutoff_A", W.A()}, {"basis_size", B2k.size()}};
  auto& T = ctx.tolerances;
  out.reports.push_back(make_report("l4_quadrature_vs_spectral", params, out.quadrature, out.spectral,
                                    T.get("l4_quadrature_vs_spectral"), qtrunc));
  out.reports.push_back(make_report("l4_spectral_vs_lvalue", params, out.spectral, out.lvalue,
                                    T.get("l4_spectral_vs_lvalue"), ltrunc));
  out.reports.push_back(make_report("l4_quadrature_vs_lvalue", params, out.quadrature, out.lvalue,
                                    T.get("l4_quadrature_vs_lvalue"), qtrunc));
  for (std::size_t i = 0; i < B2k.size(); ++i) {
    const double ip2 = out.inner_products[i] * out.inner_products[i];
    Json p = {{"k", k}, {"g", i}};
    out.reports.push_back(make_report("watson_per_form", p, ip2, out.per_g_lvalue[i],
                                      T.get("watson_per_form"), {{"root_sign", out.root_signs[i]}}));
  }
  return out;
}

// ------------------------------------------------------------ cusp identities

CheckReport cusp_P_check(const SuiteContext& ctx, int k, double y0) {
  const auto f = ctx.basis(k).front();
  const double quad = mass::cusp_integral_P(*f, y0);
  const double sum = mass::cusp_integral_P_sum(*f, y0);
  return make_report("cusp_P", {{"k", k}, {"y0", fmt(y0)}}, quad, sum, ctx.tolerances.get("cusp_P"));
}

CheckReport geodesic_R_check(const SuiteContext& ctx, int k, double y0) {
  const auto f = ctx.basis(k).front();
  const double quad = mass::geodesic_R(*f, y0);
  const double sum = mass::geodesic_R_sum(*f, y0);
  return make_report("geodesic_R", {{"k", k}, {"y0", fmt(y0)}}, quad, sum,
                     ctx.tolerances.get("geodesic_R"));
}

std::vector<CheckReport> geodesic_I_check(const SuiteContext& ctx, int k) {
  const auto f = ctx.basis(k).front();
  const auto B2k = ctx.basis(2 * k);
  const auto d = mass::geodesic_I(*f, mass::GeodesicMethod::Direct);
  const auto m = mass::geodesic_I(*f, mass::GeodesicMethod::Moment);
  const auto s = mass::geodesic_I(*f, mass::GeodesicMethod::Spectral, &B2k);
  const auto& tol = ctx.tolerances.get("geodesic_I");
  auto pair = [&](const char* name, const mass::GeodesicValue& a, const mass::GeodesicValue& b) {
    return make_report("geodesic_I", {{"k", k}, {"pair", name}}, a.value, b.value, tol,
                       {{"lhs_error", a.est_error}, {"rhs_error", b.est_error}});
  };
  return {pair("direct-moment", d, m), pair("direct-spectral", d, s), pair("moment-spectral", m, s)};
}

// ------------------------------------------------------------ Voronoi

CheckReport voronoi_check(const SuiteContext& ctx, int k, i64 c, i64 d, double N, i64 r, int kappa) {
  const auto f = ctx.basis(k).front();
  VoronoiSetup setup;
  setup.k = k;
  setup.kappa = kappa > 0 ? kappa : k;
  setup.N = N;
  setup.c = c;
  setup.r = r;
  const VoronoiKernel kernel(setup);
  const eigen::SymSquareCoefficients A(f, ctx.prime_limit);
  const auto sides = voronoi_sides(A, kernel, d);
  Json params = {{"k", k}, {"kappa", setup.kappa}, {"c", c}, {"d", d}, {"N", fmt(N)}, {"r", r}};
  Json trunc = {{"sigma", setup.sigma},
                {"dt", setup.dt},
                {"t_max", kernel.t_max()},
                {"mellin_tail_ratio", kernel.mellin_tail_ratio()},
                {"log_nodes", kernel.log_nodes()},
                {"dual_terms", sides.dual_terms},
                {"dual_tail", sides.dual_tail},
                {"reversed_sum_difference", std::abs(sides.lhs - sides.lhs_reversed)}};
  return make_report("voronoi", params, sides.lhs, sides.rhs, ctx.tolerances.get("voronoi"), trunc, true);
}

std::vector<CheckReport> voronoi_kernel_checks(const SuiteContext& ctx, const VoronoiSetup& setup) {
  VoronoiSetup shifted = setup;
  shifted.sigma = setup.sigma - 0.25;
  const VoronoiKernel K(setup), K2(shifted);
  const Json base = {{"k", setup.k}, {"kappa", setup.kappa}, {"c", setup.c}, {"N", fmt(setup.N)},
                     {"r", setup.r}};
  std::vector<CheckReport> out;
  const double X = K.decay_scale();
  for (double x : {0.25 * X, X, 4.0 * X}) {
    Json p = base;
    p["x"] = fmt(x);
    const cplx plus = K(x, 1);
    out.push_back(make_report("voronoi_contour_shift", p, plus, K2(x, 1),
                              ctx.tolerances.get("voronoi_contour_shift"),
                              {{"sigma", setup.sigma}, {"sigma_shifted", shifted.sigma}}, true));
    out.push_back(make_report("voronoi_conjugacy", p, plus, std::conj(K(x, -1)),
                              ctx.tolerances.get("voronoi_conjugacy"), {{"sigma", setup.sigma}}, true));
  }
  return out;
}

// ------------------------------------------------------------ mean value

std::vector<MeanValueRow> mean_value_report(const SuiteContext& ctx, int k,
                                            const std::vector<int>& kappas,
                                            const std::vector<i64>& r_list) {
  const auto f = ctx.basis(k).front();
  const eigen::SymSquareCoefficients A(f, ctx.prime_limit);
  std::vector<MeanValueRow> rows;
  for (int kappa : kappas) {
    const lvalues::CutoffW W({k, kappa});
    const auto basis = ctx.basis(2 * kappa);
    for (i64 r : r_list) {
      const auto mv = lvalues::mean_value_M(A, r, basis, W);
      rows.push_back({k, kappa, r, mv.M, mv.M_diag, mv.M_offdiag, mv.forced_zero});
    }
  }
  return rows;
}

// ------------------------------------------------------------ suite

std::vector<std::string> suite_identities() {
  return {"char_sum", "cusp_P", "geodesic_I", "geodesic_R", "l4", "petersson", "voronoi"};
}

std::vector<CheckReport> run_suite(const SuiteContext& ctx, const SuiteOptions& options) {
  const auto known = suite_identities();
  auto selected = options.identities.empty() ? known : options.identities;
  for (const auto& id : selected)
    if (std::find(known.begin(), known.end(), id) == known.end())
      throw ConfigError("unknown identity '" + id + "'");

  std::vector<std::function<std::vector<CheckReport>()>> jobs;
  for (const auto& id : selected) {
    for (int k : options.weights) {
      if (id == "petersson") {
        for (auto [m, n] : {std::pair<i64, i64>{1, 1}, {2, 1}, {2, 3}})
          jobs.emplace_back([&ctx, k, m, n] { return std::vector{petersson_check(ctx, k, m, n)}; });
      } else if (id == "l4") {
        jobs.emplace_back([&ctx, k] { return watson_l4_check(ctx, k).reports; });
      } else if (id == "cusp_P" || id == "geodesic_R") {
        for (double y0 : {0.9, 2.0, 10.0})
          jobs.emplace_back([&ctx, k, y0, id] {
            return std::vector{id == "cusp_P" ? cusp_P_check(ctx, k, y0) : geodesic_R_check(ctx, k, y0)};
          });
      } else if (id == "geodesic_I") {
        jobs.emplace_back([&ctx, k] { return geodesic_I_check(ctx, k); });
      } else if (id == "voronoi") {
        for (auto [c, d] : {std::pair<i64, i64>{1, 1}, {2, 1}}) {
          jobs.emplace_back([&ctx, k, c, d] { return std::vector{voronoi_check(ctx, k, c, d, 200.0, 1)}; });
          jobs.emplace_back([&ctx, k, c] {
            VoronoiSetup s;
            s.k = s.kappa = k;
            s.c = c;
            return voronoi_kernel_checks(ctx, s);
          });
        }
      }
    }
    if (id == "char_sum") {
      jobs.emplace_back([&ctx] {
        const auto g = twisted_kloosterman_grid();
        const Json params = {{"c_max", 60}, {"v_max", 8}};
        const Json trunc = {{"cases", g.cases}, {"max_bound_ratio", g.max_ratio}};
        return std::vector{
            make_report("char_sum_routes", params, g.max_route_difference, 0.0,
                        ctx.tolerances.get("char_sum_routes"), trunc),
            make_report("char_sum_bound", params, static_cast<double>(g.violations), 0.0,
                        ctx.tolerances.get("char_sum_bound"), trunc)};
      });
    }
  }

  std::vector<std::vector<CheckReport>> results(jobs.size());
  numeric::parallel_for(jobs.size(), [&](std::size_t i) { results[i] = jobs[i](); });
  std::vector<CheckReport> out;
  for (auto& r : results)
    for (auto& rep : r) out.push_back(std::move(rep));
  sort_reports(out);
  return out;
}

}  // namespace cuspmass::verify
