#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "cuspmass/error.hpp"
#include "cuspmass/lvalues.hpp"
#include "cuspmass/mass.hpp"
#include "cuspmass/numeric.hpp"
#include "cuspmass/oscillatory.hpp"
#include "cuspmass/report.hpp"
#include "cuspmass/sym_square.hpp"
#include "cuspmass/verification.hpp"
#include "cuspmass/version.hpp"

namespace cuspmass::cli {

namespace {

using report::Table;
using i64 = std::int64_t;

const std::vector<std::string> kCommands = {"eigen",   "norms",    "geodesic",  "cusp",
                                            "shifted", "lvalues",  "check",     "statphase",
                                            "fourth-moment"};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// key=value lines; '#' starts a comment.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    if (out.back().first.empty())
      throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
  }
  return out;
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

bool has_cusp_forms(int k) { return k >= 12 && k % 2 == 0 && k != 14; }

std::vector<int> weight_range(int lo, int hi) {
  std::vector<int> out;
  for (int k = lo; k <= hi; ++k)
    if (has_cusp_forms(k)) out.push_back(k);
  return out;
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ", ") + x;
  return s;
}

struct Context {
  const RunConfig& cfg;
  std::ostream& out;
  eigen::EigenOptions eopts;

  eigen::EigenBasis basis(int k) const { return eigen::hecke_eigenbasis(k, cfg.prime_limit, eopts); }

  void emit(const Table& t) const {
    if (cfg.output.empty() || cfg.output == "-") {
      t.write_csv(out);
      return;
    }
    std::ofstream f(cfg.output);
    if (!f) throw ConfigError("cannot open output file '" + cfg.output + "'");
    t.write_csv(f);
  }
};

int cmd_eigen(const Context& c) {
  Table t({"k", "index", "dimension", "coefficient_field", "lambda_2", "lambda_3", "lambda_5",
           "L1_sym2", "L1_sym2_stability"});
  for (int k : c.cfg.weights)
    for (const auto& f : c.basis(k))
      t.add_row({static_cast<long long>(k), static_cast<long long>(f->index()),
                 static_cast<long long>(f->dimension()), f->coefficient_field_tag(), f->lambda(2),
                 f->lambda(3), f->lambda(5), f->sym2_L1(), f->sym2_L1_stability()});
  c.emit(t);
  return 0;
}

// Mass-distribution rows share one schema: k, quantity, method, value, est_error, params_json.
Table mass_table() { return Table({"k", "quantity", "method", "value", "est_error", "params_json"}); }

void mass_row(Table& t, int k, const std::string& quantity, const std::string& method, double value,
              double est_error, const verify::Json& params) {
  t.add_row({static_cast<long long>(k), quantity, method, value, est_error, params.dump()});
}

int cmd_norms(const Context& c) {
  auto t = mass_table();
  for (int k : c.cfg.weights)
    for (const auto& f : c.basis(k))
      for (double p : c.cfg.p_values) {
        const auto v = mass::lp_norm(*f, p);
        mass_row(t, k, "Lp_norm", "quadrature", v.value, v.est_error,
                 {{"p", p}, {"index", f->index()}, {"cusp_tail", v.tail}});
      }
  c.emit(t);
  return 0;
}

int cmd_geodesic(const Context& c) {
  auto t = mass_table();
  for (int k : c.cfg.weights) {
    const auto f = c.basis(k).front();
    const auto B2k = c.basis(2 * k);
    const std::pair<const char*, mass::GeodesicMethod> methods[] = {
        {"direct", mass::GeodesicMethod::Direct},
        {"moment", mass::GeodesicMethod::Moment},
        {"spectral", mass::GeodesicMethod::Spectral}};
    for (const auto& [name, m] : methods) {
      const auto v = mass::geodesic_I(*f, m, &B2k);
      mass_row(t, k, "I", name, v.value, v.est_error, verify::Json::object());
    }
    for (double y0 : c.cfg.y0_values) {
      const double q = mass::geodesic_R(*f, y0), s = mass::geodesic_R_sum(*f, y0);
      mass_row(t, k, "R", "quadrature", q, std::abs(q - s), {{"y0", y0}});
      mass_row(t, k, "R", "sum", s, std::abs(q - s), {{"y0", y0}});
    }
  }
  c.emit(t);
  return 0;
}

int cmd_cusp(const Context& c) {
  auto t = mass_table();
  for (int k : c.cfg.weights) {
    const auto f = c.basis(k).front();
    for (double y0 : c.cfg.y0_values) {
      const double q = mass::cusp_integral_P(*f, y0), s = mass::cusp_integral_P_sum(*f, y0);
      mass_row(t, k, "P", "quadrature", q, std::abs(q - s), {{"y0", y0}});
      mass_row(t, k, "P", "sum", s, std::abs(q - s), {{"y0", y0}});
      mass_row(t, k, "P", "main_term", mass::cusp_integral_P_main(*f, y0), std::nan(""), {{"y0", y0}});
    }
  }
  c.emit(t);
  return 0;
}

int cmd_shifted(const Context& c) {
  Table t({"k", "l", "T", "S", "sum_S_over_l", "sum_S2_over_l", "shape_first", "shape_second"});
  for (int k : c.cfg.weights) {
    const auto f = c.basis(k).front();
    const auto tab = mass::ShiftedConvolutionTable::build(*f, c.cfg.l_max);
    const double kk = k;
    double s1 = 0.0, s2 = 0.0;
    for (i64 l = 2; l <= c.cfg.l_max; ++l) {
      const double S = tab.S[static_cast<std::size_t>(l)], L = static_cast<double>(l);
      s1 += S / L;
      s2 += S * S / L;
      // (k^{1/4} + N/k) and (k^{5/6} + N k^{-1/6} + N² k^{-3/2})
      const double b1 = std::pow(kk, 0.25) + L / kk;
      const double b2 = std::pow(kk, 5.0 / 6.0) + L * std::pow(kk, -1.0 / 6.0) + L * L * std::pow(kk, -1.5);
      t.add_row({static_cast<long long>(k), static_cast<long long>(l), tab.T[static_cast<std::size_t>(l)], S,
                 s1, s2, b1, b2});
    }
  }
  c.emit(t);
  return 0;
}

int cmd_lvalues(const Context& c) {
  Table t({"k", "kappa", "g", "L_half_g", "L_half_sym2f_g", "L1_sym2_g", "forced_zero"});
  for (int k : c.cfg.weights) {
    const auto f = c.basis(k).front();
    const eigen::SymSquareCoefficients A(f, c.cfg.prime_limit);
    const auto kappas = c.cfg.kappas.empty() ? std::vector<int>{k} : c.cfg.kappas;
    for (int kappa : kappas) {
      const lvalues::CutoffW W({k, kappa});
      const auto B = c.basis(2 * kappa);
      for (std::size_t i = 0; i < B.size(); ++i) {
        const auto lg = lvalues::L_half_g(*B[i]);
        const auto ls = lvalues::L_half_sym2f_g(A, *B[i], W);
        t.add_row({static_cast<long long>(k), static_cast<long long>(kappa), static_cast<long long>(i),
                   lg.value, ls.value, B[i]->sym2_L1(), lg.forced_zero || ls.forced_zero});
      }
    }
  }
  c.emit(t);
  return 0;
}

int cmd_check(const Context& c) {
  verify::SuiteContext ctx;
  ctx.eigen = c.eopts;
  ctx.prime_limit = c.cfg.prime_limit;
  for (const auto& [id, v] : c.cfg.tolerances) ctx.tolerances.set(id, v);
  verify::SuiteOptions opts;
  opts.identities = c.cfg.identities;
  opts.weights = c.cfg.weights;
  const auto reports = verify::run_suite(ctx, opts);
  if (c.cfg.output.empty() || c.cfg.output == "-") {
    report::write_json_lines(c.out, reports);
  } else {
    std::ofstream f(c.cfg.output);
    if (!f) throw ConfigError("cannot open output file '" + c.cfg.output + "'");
    report::write_json_lines(f, reports);
  }
  for (const auto& r : reports)
    if (!r.passed) return 1;
  return 0;
}

int cmd_statphase(const Context& c) {
  Table t({"lambda", "N", "expansion_re", "expansion_im", "quadrature_re", "quadrature_im",
           "rel_error", "error_estimate", "terms_decreasing"});
  for (double lam : c.cfg.lambdas) {
    const auto gc = osc::quadratic_gaussian_case(lam);
    const auto q = osc::oscillatory_quadrature(gc.w, gc.h, 1e-14);
    for (int N = 0; N <= c.cfg.terms; ++N) {
      const auto r = osc::stationary_phase_expand(gc.w, gc.h, N);
      t.add_row({lam, static_cast<long long>(N), r.value.real(), r.value.imag(), q.real(), q.imag(),
                 std::abs(r.value - q) / std::abs(q), r.error_estimate, r.terms_decreasing});
    }
  }
  c.emit(t);
  return 0;
}

int cmd_fourth_moment(const Context& c) {
  std::vector<std::string> cols{"k", "index", "dimension", "norm4_fourth_power", "minus_two", "est_error"};
  if (c.cfg.mean_value) cols.insert(cols.end(), {"M_r1", "M_diag", "M_offdiag"});
  Table t(cols);
  for (int k : c.cfg.weights) {
    const auto B = c.basis(k);
    eigen::EigenBasis B2k;
    if (c.cfg.mean_value) B2k = c.basis(2 * k);
    for (const auto& f : B) {
      const auto v = mass::lp_norm(*f, 4.0);
      const double m4 = std::pow(v.value, 4.0);
      std::vector<report::Cell> row{static_cast<long long>(k), static_cast<long long>(f->index()),
                                    static_cast<long long>(f->dimension()), m4, m4 - 2.0,
                                    4.0 * std::pow(v.value, 3.0) * v.est_error};
      if (c.cfg.mean_value) {
        const eigen::SymSquareCoefficients A(f, c.cfg.prime_limit);
        const lvalues::CutoffW W({k, k});
        const auto mv = lvalues::mean_value_M(A, 1, B2k, W);
        row.insert(row.end(), {mv.M, mv.M_diag, mv.M_offdiag});
      }
      t.add_row(std::move(row));
    }
  }
  c.emit(t);
  return 0;
}

}  // namespace

int parse(int argc, const char* const* argv, RunConfig& cfg, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical experiments with holomorphic cusp forms of level one", "cuspmass"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  std::string config_path;
  app.add_option("--config", config_path, "key=value file; keys mirror the long flags");
  app.add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--cache", cfg.cache_dir, "eigen-data cache directory (default $CUSPMASS_CACHE)");
  app.add_option("-o,--output", cfg.output, "output file, '-' for standard output");
  app.add_option("--prime-limit", cfg.prime_limit, "primes p ≤ limit carry Hecke eigenvalues")
      ->check(CLI::PositiveNumber);
  app.set_version_flag("--version", std::string("cuspmass ") + kVersion);

  auto weights = [&](CLI::App* s, const std::string& help) {
    s->add_option("--k", cfg.weights, help)->check(CLI::PositiveNumber)->delimiter(',');
  };
  auto* eigen = app.add_subcommand("eigen", "build or load Hecke eigenbases");
  weights(eigen, "weights");
  auto* norms = app.add_subcommand("norms", "L^p norms over a range of weights");
  weights(norms, "weights");
  int k_min = 0, k_max = 0;
  norms->add_option("--k-min", k_min, "lowest weight of a range")->check(CLI::PositiveNumber);
  norms->add_option("--k-max", k_max, "highest weight of a range")->check(CLI::PositiveNumber);
  norms->add_option("--p", cfg.p_values, "exponents")->check(CLI::PositiveNumber)->delimiter(',');
  auto* geodesic = app.add_subcommand("geodesic", "three evaluations of the geodesic integral and R(y0)");
  weights(geodesic, "weights");
  geodesic->add_option("--y0", cfg.y0_values, "heights")->check(CLI::PositiveNumber)->delimiter(',');
  auto* cusp = app.add_subcommand("cusp", "P(y0) by quadrature and by coefficient sums");
  weights(cusp, "weights");
  cusp->add_option("--y0", cfg.y0_values, "heights")->check(CLI::PositiveNumber)->delimiter(',');
  auto* shifted = app.add_subcommand("shifted", "shifted convolution sums and their partial sums");
  weights(shifted, "weights");
  shifted->add_option("--l-max", cfg.l_max, "largest shift")->check(CLI::Range(2, 1000000));
  auto* lval = app.add_subcommand("lvalues", "central values for g in B_2kappa");
  weights(lval, "weights of f");
  lval->add_option("--kappa", cfg.kappas, "kappa values")->check(CLI::PositiveNumber)->delimiter(',');
  auto* check = app.add_subcommand("check", "run the verification suite (JSON lines)");
  weights(check, "weights");
  check->add_option("--identity", cfg.identities, "identity filter")
      ->check(CLI::IsMember(verify::suite_identities()))
      ->delimiter(',');
  std::vector<std::string> tol_overrides;
  check->add_option("--tol", tol_overrides, "tolerance override identity=value")->delimiter(',');
  auto* stat = app.add_subcommand("statphase", "stationary phase against quadrature");
  stat->add_option("--lambda", cfg.lambdas, "frequencies")->check(CLI::PositiveNumber)->delimiter(',');
  stat->add_option("--terms", cfg.terms, "largest N")->check(CLI::Range(0, 8));
  auto* fm = app.add_subcommand("fourth-moment", "normalized fourth moments across weights");
  weights(fm, "weights (default 12..40)");
  fm->add_option("--k-min", k_min, "lowest weight of a range")->check(CLI::PositiveNumber);
  fm->add_option("--k-max", k_max, "highest weight of a range")->check(CLI::PositiveNumber);
  fm->add_flag("--mean-value", cfg.mean_value, "add the r = 1 mean value columns");

  // the config file may name the command itself
  std::vector<std::pair<std::string, std::string>> file_entries;
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  try {
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--config" && i + 1 < args.size()) file_entries = read_config(args[i + 1]);
      if (args[i].rfind("--config=", 0) == 0) file_entries = read_config(args[i].substr(9));
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  bool has_command = false;
  for (const auto& a : args)
    for (const auto& c : kCommands) has_command |= a == c;
  for (const auto& [key, value] : file_entries)
    if (key == "command" && !has_command) args.push_back(value);

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code != 0) err << app.help();
    return code == 0 ? -1 : 2;
  }

  CLI::App* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front();
  try {
    for (const auto& [key, value] : file_entries) {
      if (key == "command" || key == "config") continue;
      CLI::Option* opt = sub ? sub->get_option_no_throw("--" + key) : nullptr;
      if (!opt) opt = app.get_option_no_throw("--" + key);
      if (!opt) throw ConfigError("unknown config key '" + key + "'");
      if (opt->count() > 0) continue;  // the command line wins
      const auto items = opt->get_items_expected_max() > 1 ? split_list(value) : std::vector<std::string>{value};
      for (const auto& it : items) opt->add_result(it);
      opt->run_callback();
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const CLI::Error& e) {
    err << "error: config: " << e.what() << "\n";
    return 2;
  }

  if (!sub) {
    err << "error: a command is required (" << join(kCommands) << ")\n" << app.help();
    return 2;
  }
  cfg.command = sub->get_name();
  for (const auto& kv : tol_overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      err << "error: --tol expects identity=value\n";
      return 2;
    }
    try {
      cfg.tolerances[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    } catch (const std::exception&) {
      err << "error: bad tolerance value in '" << kv << "'\n";
      return 2;
    }
  }
  if (k_min > 0 || k_max > 0) {
    if (k_min <= 0 || k_max < k_min) {
      err << "error: --k-min and --k-max must form a non-empty range\n";
      return 2;
    }
    const auto r = weight_range(k_min, k_max);
    cfg.weights.insert(cfg.weights.end(), r.begin(), r.end());
  }
  if (cfg.weights.empty()) cfg.weights = cfg.command == "fourth-moment" ? weight_range(12, 40) : std::vector<int>{12};
  for (int k : cfg.weights)
    if (!has_cusp_forms(k)) {
      err << "error: S_" << k << " is zero; weights must be even, at least 12 and not 14\n";
      return 2;
    }
  if (cfg.cache_dir.empty()) cfg.cache_dir = eigen::default_cache_dir();
  return 0;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    numeric::set_thread_count(cfg.threads);
    Context c{cfg, out, {}};
    c.eopts.cache_dir = cfg.cache_dir;
    if (cfg.command == "eigen") return cmd_eigen(c);
    if (cfg.command == "norms") return cmd_norms(c);
    if (cfg.command == "geodesic") return cmd_geodesic(c);
    if (cfg.command == "cusp") return cmd_cusp(c);
    if (cfg.command == "shifted") return cmd_shifted(c);
    if (cfg.command == "lvalues") return cmd_lvalues(c);
    if (cfg.command == "check") return cmd_check(c);
    if (cfg.command == "statphase") return cmd_statphase(c);
    if (cfg.command == "fourth-moment") return cmd_fourth_moment(c);
    err << "error: unknown command '" << cfg.command << "'\n";
    return 2;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidWeightError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  const int code = parse(argc, argv, cfg, out, err);
  if (code == -1) return 0;  // --help or --version
  if (code != 0) return code;
  return run(cfg, out, err);
}

}  // namespace cuspmass::cli
