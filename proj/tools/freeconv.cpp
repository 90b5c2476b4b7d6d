// Command-line frontend: density evaluation, free convolution, theorem
// verification runs, the two-measure counterexample pipeline, moment dumps
// and the random-matrix oracle.

#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "freeconv/build.hpp"
#include "freeconv/counterexample.hpp"
#include "freeconv/cumulants.hpp"
#include "freeconv/harness.hpp"
#include "freeconv/mp.hpp"
#include "freeconv/psi.hpp"
#include "freeconv/theorem.hpp"

using namespace freeconv;

namespace {

constexpr int kOk = 0;
constexpr int kUsageError = 1;
constexpr int kVerificationFailure = 2;

std::vector<double> parse_csv_doubles(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

RationalPert parse_perturb(const std::string& s) {
  auto v = parse_csv_doubles(s);
  if (v.size() < 3 || v.size() > 4)
    throw CLI::ValidationError("--perturb expects eps,center,order[,scale]");
  RationalPert rp{v[0], v[1], static_cast<int>(std::lround(v[2])), v.size() == 4 ? v[3] : 1.0};
  if (rp.order < 1) throw CLI::ValidationError("perturbation order must be >= 1");
  return rp;
}

// measure spec strings: terms joined by '+', each "fp:<lambda>",
// "shift:<c>" or "pert:<eps>,<center>,<order>[,<scale>]"
RExpr parse_measure_spec(const std::string& spec) {
  std::vector<RTerm> terms;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, '+')) {
    auto colon = part.find(':');
    if (colon == std::string::npos) throw CLI::ValidationError("bad measure term: " + part);
    std::string kind = part.substr(0, colon), args = part.substr(colon + 1);
    if (kind == "fp") {
      terms.push_back(FreePoisson{std::stod(args)});
    } else if (kind == "shift") {
      terms.push_back(Translate{std::stod(args)});
    } else if (kind == "pert") {
      terms.push_back(parse_perturb(args));
    } else {
      throw CLI::ValidationError("unknown measure term kind: " + kind);
    }
  }
  if (terms.empty()) throw CLI::ValidationError("empty measure spec");
  return RExpr(std::move(terms)).normalized();
}

void parse_grid(const std::string& s, double* a, double* b, int* n) {
  std::stringstream ss(s);
  std::string item;
  std::vector<std::string> parts;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 3) throw CLI::ValidationError("--grid expects a:b:n");
  *a = std::stod(parts[0]);
  *b = std::stod(parts[1]);
  *n = std::stoi(parts[2]);
  if (*n < 2 || !(*b > *a)) throw CLI::ValidationError("--grid needs b > a and n >= 2");
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw NumericError("cannot open " + path + " for writing");
  out << text;
}

int cmd_density(const std::string& grid_spec, double lambda,
                const std::optional<std::string>& perturb, const std::string& out_path) {
  double a, b;
  int n;
  parse_grid(grid_spec, &a, &b, &n);
  std::vector<RTerm> terms{FreePoisson{lambda}};
  if (perturb) terms.push_back(parse_perturb(*perturb));
  RExpr e = RExpr(std::move(terms)).normalized();

  InversionConfig icfg;
  std::string csv = "x,density\n";
  std::vector<Atom> atoms;
  double atom0 = extract_atom(e, e.total_translate(), icfg);
  if (atom0 > 0) atoms.push_back({e.total_translate(), atom0});
  for (int i = 0; i < n; ++i) {
    double x = a + (b - a) * i / (n - 1.0);
    double d = 0.0;
    bool off_pole = true;
    for (const auto& at : atoms)
      if (std::abs(x - at.x) < 1e-9) off_pole = false;
    if (off_pole) d = continuous_density(e, x, atoms, icfg);
    csv += fmt_double(x) + "," + fmt_double(d) + "\n";
  }
  write_text(out_path, csv);

  nlohmann::json side;
  side["atoms"] = nlohmann::json::array();
  for (const auto& at : atoms) side["atoms"].push_back({{"x", at.x}, {"mass", at.mass}});
  side["support"] = {a, b};
  side["mass_tol"] = 1e-6;
  write_text(out_path + ".json", side.dump(2) + "\n");
  return kOk;
}

int cmd_convolve(const std::string& lhs, const std::string& rhs, const std::string& out_path) {
  RExpr conv = free_convolve(parse_measure_spec(lhs), parse_measure_spec(rhs));
  SpectralMeasure m = build_measure(conv);
  m.write(out_path);
  return kOk;
}

int cmd_moments(const std::string& spec, int n) {
  RExpr e = parse_measure_spec(spec);
  auto moments = cumulants_to_moments(r_taylor_coefficients(e, n));
  std::cout << "k,moment\n";
  for (int k = 1; k <= n; ++k)
    std::cout << k << "," << fmt_double(moments[k - 1]) << "\n";
  return kOk;
}

int cmd_verify_theorem(double lambda, const std::string& perturb, const std::string& report_path,
                       uint64_t seed) {
  RationalPert rp = parse_perturb(perturb);
  RExpr e({FreePoisson{lambda}, rp});
  e = e.normalized();
  RegionConfig rc = RegionConfig::defaults(lambda);

  nlohmann::json j;
  ConditionReport rep = check_conditions(e, rc, seed);
  j["conditions"] = nlohmann::json::parse(rep.to_json());
  bool ok = rep.all_pass();

  if (ok) {
    try {
      CriticalPoints cp = find_critical_points(e, rc);
      j["critical_points"] = {{"u_re", cp.u.real()},
                              {"u_im", cp.u.imag()},
                              {"v_re", cp.v.real()},
                              {"v_im", cp.v.imag()}};
      TracedCurve gamma = trace_gamma(e, rc, cp);
      j["gamma_points"] = gamma.points.size();
      std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
      std::uniform_real_distribution<double> ux(-2.0, 2.0), uy(0.1, 2.1);
      nlohmann::json counts = nlohmann::json::array();
      for (int k = 0; k < 20; ++k) {
        Complex omega{ux(rng), uy(rng)};
        PreimageCount pc = count_preimages(e, lambda, omega, cp, gamma, 200.0);
        counts.push_back({{"omega_re", omega.real()},
                          {"omega_im", omega.imag()},
                          {"count", pc.count},
                          {"residual", pc.residual}});
        if (pc.count != 1) ok = false;
      }
      j["preimage_counts"] = counts;
    } catch (const NumericError& err) {
      ok = false;
      j["error"] = err.what();
    }
  }
  LemmaReport lr = verify_lemma(e);
  j["lemma"] = nlohmann::json::parse(lr.to_json());
  ok = ok && lr.pass();
  j["pass"] = ok;
  write_text(report_path, j.dump(2) + "\n");
  return ok ? kOk : kVerificationFailure;
}

int cmd_counterexample(double lambda, double lambda_prime, std::optional<double> eps,
                       bool do_search, const std::string& report_path,
                       const std::string& outdir, uint64_t seed) {
  CounterexampleConfig cfg;
  cfg.lambda = lambda;
  cfg.lambda_prime = lambda_prime;
  cfg.seed = seed;
  if (do_search) {
    const double grid[] = {0.1, 0.05, 0.02, 0.01, 0.005, 2e-3, 1e-3, 5e-4, 2e-4};
    SearchOutcome found = search_epsilon(cfg, grid);
    cfg.eps = found.eps;
  } else if (eps) {
    cfg.eps = *eps;
  } else {
    throw CLI::ValidationError("counterexample needs --eps or --search");
  }
  RaikovReport rep = verify_raikov_failure(cfg);
  write_text(report_path, rep.to_json(outdir, "counterexample"));
  return rep.affirmative ? kOk : kVerificationFailure;
}

int cmd_matrix_oracle(double lambda, std::optional<double> lambda2, int p, uint64_t seed,
                      int trials, const std::string& out_path) {
  EnsembleSpec spec;
  spec.p = p;
  spec.lambda1 = lambda;
  spec.lambda2 = lambda2.value_or(0.0);
  spec.seed = seed;
  spec.trials = trials;
  EmpiricalSpectrum emp =
      lambda2 ? sample_free_sum_spectrum(spec) : sample_wishart_spectrum(spec);
  std::string csv = "eigenvalue\n";
  for (double ev : emp.eigenvalues) csv += fmt_double(ev) + "\n";
  write_text(out_path, csv);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical free-probability toolkit"};
  app.require_subcommand(1);

  // density
  auto* density = app.add_subcommand("density", "sample a density from its R-transform");
  double d_lambda = 1.0;
  std::string d_grid, d_out;
  std::optional<std::string> d_perturb;
  density->add_option("--lambda", d_lambda, "free Poisson rate")->required();
  density->add_option("--perturb", d_perturb, "eps,center,order[,scale]");
  density->add_option("--grid", d_grid, "a:b:n")->required();
  density->add_option("--out", d_out, "output CSV path")->required();

  // convolve
  auto* convolve = app.add_subcommand("convolve", "free convolution of two measure specs");
  std::string c_lhs, c_rhs, c_out;
  convolve->add_option("--lhs", c_lhs, "measure spec, e.g. fp:0.5+pert:0.01,2,2")->required();
  convolve->add_option("--rhs", c_rhs, "measure spec")->required();
  convolve->add_option("--out", c_out, "output CSV path")->required();

  // moments
  auto* moments = app.add_subcommand("moments", "moments from the cumulant route");
  std::string m_spec;
  int m_n = 8;
  moments->add_option("--spec", m_spec, "measure spec")->required();
  moments->add_option("-n", m_n, "number of moments");

  // verify-theorem
  auto* verify = app.add_subcommand("verify-theorem", "region/contour verification run");
  double v_lambda = 0.5;
  std::string v_perturb, v_report;
  uint64_t v_seed = 20240901;
  verify->add_option("--lambda", v_lambda, "free Poisson base rate in (0,1)")->required();
  verify->add_option("--perturb", v_perturb, "eps,center,order[,scale]")->required();
  verify->add_option("--report", v_report, "output JSON path")->required();
  verify->add_option("--seed", v_seed, "sampling seed");

  // counterexample
  auto* cx = app.add_subcommand("counterexample", "two-measure free Poisson factorization");
  double x_lambda = 1.5, x_lambda_prime = 0.5;
  std::optional<double> x_eps;
  bool x_search = false;
  std::string x_report = "raikov_report.json", x_outdir = ".";
  uint64_t x_seed = 20240901;
  cx->add_option("--lambda", x_lambda, "target free Poisson mean")->required();
  cx->add_option("--lambda-prime", x_lambda_prime, "factor rate")->required();
  cx->add_option("--eps", x_eps, "perturbation size");
  cx->add_flag("--search", x_search, "sweep a built-in eps grid");
  cx->add_option("--report", x_report, "output JSON path");
  cx->add_option("--outdir", x_outdir, "directory for measure CSV files");
  cx->add_option("--seed", x_seed, "sampling seed");

  // matrix-oracle
  auto* oracle = app.add_subcommand("matrix-oracle", "Wishart eigenvalue sampler");
  double o_lambda = 1.0;
  std::optional<double> o_lambda2;
  int o_p = 1000, o_trials = 1;
  uint64_t o_seed = 1;
  std::string o_out;
  oracle->add_option("--lambda", o_lambda, "aspect ratio n/p")->required();
  oracle->add_option("--lambda2", o_lambda2, "second block: sum of two Wisharts");
  oracle->add_option("-p", o_p, "matrix dimension")->required();
  oracle->add_option("--seed", o_seed, "RNG seed")->required();
  oracle->add_option("--trials", o_trials, "independent repetitions");
  oracle->add_option("--out", o_out, "output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    app.exit(err);  // prints help/error
    return kUsageError;
  }

  try {
    if (*density) return cmd_density(d_grid, d_lambda, d_perturb, d_out);
    if (*convolve) return cmd_convolve(c_lhs, c_rhs, c_out);
    if (*moments) return cmd_moments(m_spec, m_n);
    if (*verify) return cmd_verify_theorem(v_lambda, v_perturb, v_report, v_seed);
    if (*cx)
      return cmd_counterexample(x_lambda, x_lambda_prime, x_eps, x_search, x_report, x_outdir,
                                x_seed);
    if (*oracle) return cmd_matrix_oracle(o_lambda, o_lambda2, o_p, o_seed, o_trials, o_out);
  } catch (const CLI::ValidationError& err) {
    std::cerr << err.what() << "\n";
    return kUsageError;
  } catch (const GateFailure& err) {
    std::cerr << "verification failure: " << err.what() << "\n";
    return kVerificationFailure;
  } catch (const NumericError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kVerificationFailure;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kUsageError;
  }
  return kUsageError;
}
