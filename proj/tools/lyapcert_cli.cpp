// lyapcert: certify convergence rates of momentum methods and their limiting
// ODE, reproduce the rate/momentum curve and the best-rate table, and run
// certified trajectories. CSV/JSON output for plotting and regression tests.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lyapcert/cert_continuous.hpp"
#include "lyapcert/cert_discrete.hpp"
#include "lyapcert/dynamics.hpp"
#include "lyapcert/heavy_ball.hpp"
#include "lyapcert/lmi.hpp"
#include "lyapcert/model.hpp"
#include "lyapcert/sym.hpp"

using json = nlohmann::ordered_json;
using namespace lyapcert;

namespace {

constexpr int kExitBadParams = 2;
constexpr int kExitNumerical = 3;

std::string fmt(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("LYAPCERT_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 42;
}

struct Output {
  std::string path;  // empty = stdout

  void write(const std::string& text) const {
    if (path.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    f << text;
  }
};

// Leading '#' lines echo the resolved parameters, then an RFC-4180-style
// header and data rows with 17-significant-digit floats.
class CsvBuilder {
 public:
  void param(const std::string& key, const std::string& value) {
    params_ << "# " << key << "=" << value << "\n";
  }
  void param(const std::string& key, double value) { param(key, fmt(value)); }
  void header(const std::vector<std::string>& cols) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      body_ << (i ? "," : "") << cols[i];
    }
    body_ << "\n";
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      body_ << (i ? "," : "") << cells[i];
    }
    body_ << "\n";
  }
  void note(const std::string& key, const std::string& value) {
    body_ << "# " << key << "=" << value << "\n";
  }
  std::string str() const { return params_.str() + body_.str(); }

 private:
  std::ostringstream params_;
  std::ostringstream body_;
};

json cert_to_json(const DiscreteCertificate& cert) {
  json out;
  out["params"] = {{"m", cert.problem.m},   {"L", cert.problem.L},
                   {"kappa", cert.problem.kappa}, {"alpha", cert.params.alpha},
                   {"beta", cert.params.beta},    {"gamma", cert.params.gamma}};
  out["delta"] = cert.nd.delta;
  out["b"] = cert.nd.b;
  out["r"] = cert.nd.r;
  out["rho_sq"] = cert.rho_sq;
  out["p_hat"] = {{"p11", cert.p_hat.a11}, {"p12", cert.p_hat.a12}, {"p22", cert.p_hat.a22}};
  const auto ev = eigenvalues(cert.t_hat);
  out["t_hat_eigenvalues"] = {ev[0], ev[1], ev[2]};
  out["valid"] = cert.valid;
  return out;
}

int cmd_certify(double m, double L, std::optional<double> alpha,
                std::optional<double> beta, bool optimal, const std::string& format,
                const Output& out) {
  const ProblemClass pc = validate_problem(m, L);
  MethodParams mp{};
  if (optimal) {
    mp = optimal_params(pc);
  } else if (alpha && beta) {
    mp = MethodParams{*alpha, *beta, *beta};
  } else {
    throw std::invalid_argument("certify needs either --optimal or both --alpha and --beta");
  }
  const DiscreteCertificate cert = certify(pc, mp);

  if (format == "csv") {
    CsvBuilder csv;
    csv.param("m", pc.m);
    csv.param("L", pc.L);
    csv.param("alpha", mp.alpha);
    csv.param("beta", mp.beta);
    csv.param("gamma", mp.gamma);
    csv.header({"delta", "b", "r", "rho_sq", "p11", "p12", "p22", "t_eig_1", "t_eig_2",
                "t_eig_3", "valid"});
    const auto ev = eigenvalues(cert.t_hat);
    csv.row({fmt(cert.nd.delta), fmt(cert.nd.b), fmt(cert.nd.r), fmt(cert.rho_sq),
             fmt(cert.p_hat.a11), fmt(cert.p_hat.a12), fmt(cert.p_hat.a22), fmt(ev[0]),
             fmt(ev[1]), fmt(ev[2]), cert.valid ? "1" : "0"});
    out.write(csv.str());
  } else {
    out.write(cert_to_json(cert).dump(2) + "\n");
  }
  return cert.valid ? 0 : kExitNumerical;
}

int cmd_curve(double delta, int samples, std::optional<double> b_lo,
              std::optional<double> b_hi, const std::string& format, const Output& out) {
  if (delta < 0.0 || delta >= 1.0) {
    throw std::invalid_argument("--delta must lie in [0, 1); 0 selects the ODE curve");
  }
  if (samples < 2) throw std::invalid_argument("--samples must be >= 2");

  double lo = 0.0, hi = 0.0;
  if (b_lo && b_hi) {
    lo = *b_lo;
    hi = *b_hi;
  } else if (delta > 0.0) {
    const BWindow w = momentum_window(delta);
    const double pad = 0.1 * (w.b_max - w.b_min);
    lo = w.b_min - pad;
    hi = w.b_max + pad;
  } else {
    lo = -4.0;
    hi = 4.0;
  }

  auto rate_at = [&](double b) {
    return delta > 0.0 ? solve_rate(b, delta) : solve_rate_ode(b);
  };

  CsvBuilder csv;
  csv.param("delta", delta);
  csv.param("samples", std::to_string(samples));
  csv.param("b_lo", lo);
  csv.param("b_hi", hi);
  json jrows = json::array();
  csv.header({"b", "r"});
  for (int i = 0; i < samples; ++i) {
    const double b = lo + (hi - lo) * static_cast<double>(i) / (samples - 1);
    const double r = rate_at(b);
    csv.row({fmt(b), fmt(r)});
    jrows.push_back({{"b", b}, {"r", r}});
  }
  // Marker: the double-root point with the best rate.
  const double b_star = 2.0 / (1.0 + delta);
  csv.row({fmt(b_star), fmt(1.0)});
  jrows.push_back({{"b", b_star}, {"r", 1.0}});

  if (format == "json") {
    json j;
    j["params"] = {{"delta", delta}, {"samples", samples}, {"b_lo", lo}, {"b_hi", hi}};
    j["rows"] = jrows;
    out.write(j.dump(2) + "\n");
  } else {
    out.write(csv.str());
  }
  return 0;
}

int cmd_table(const std::string& kappas_arg, const std::string& format, const Output& out,
              bool verbose) {
  std::vector<double> kappas;
  {
    std::stringstream ss(kappas_arg);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (!tok.empty()) kappas.push_back(std::stod(tok));
    }
  }
  if (kappas.empty()) throw std::invalid_argument("--kappas parsed to an empty list");

  CsvBuilder csv;
  csv.param("kappas", kappas_arg);
  csv.header({"kappa", "b_bar_minus_2", "r_bar_minus_1", "s_bar", "p11_over_m_minus_half",
              "p12_over_m_minus_half", "p22_over_m_minus_half", "error"});
  json jrows = json::array();
  for (double kappa : kappas) {
    if (verbose) std::cerr << "table: kappa = " << kappa << "\n";
    try {
      const SigmaCurvePoint pt = max_rate_point(kappa);
      csv.row({fmt(kappa), fmt(pt.b_bar - 2.0), fmt(pt.r_bar - 1.0), fmt(pt.s_bar),
               fmt(pt.p11_over_m - 0.5), fmt(pt.p12_over_m - 0.5),
               fmt(pt.p22_over_m - 0.5), ""});
      jrows.push_back({{"kappa", kappa},
                       {"b_bar_minus_2", pt.b_bar - 2.0},
                       {"r_bar_minus_1", pt.r_bar - 1.0},
                       {"s_bar", pt.s_bar},
                       {"p11_over_m_minus_half", pt.p11_over_m - 0.5},
                       {"p12_over_m_minus_half", pt.p12_over_m - 0.5},
                       {"p22_over_m_minus_half", pt.p22_over_m - 0.5}});
    } catch (const std::exception& e) {
      csv.row({fmt(kappa), "", "", "", "", "", "", std::string("\"") + e.what() + "\""});
      jrows.push_back({{"kappa", kappa}, {"error", e.what()}});
    }
  }
  if (format == "json") {
    json j;
    j["params"] = {{"kappas", kappas_arg}};
    j["rows"] = jrows;
    out.write(j.dump(2) + "\n");
  } else {
    out.write(csv.str());
  }
  return 0;
}

int cmd_simulate(const std::string& method, const std::string& problem, int dim, double m,
                 double L, int steps, double t_end, std::optional<double> alpha,
                 std::optional<double> beta, bool optimal, double b_bar,
                 std::uint64_t seed, const std::string& format, const Output& out,
                 bool verbose) {
  const ProblemClass pc = validate_problem(m, L);
  Objective obj = problem == "softplus" ? make_softplus_composite(m, L, dim)
                                        : make_quadratic(m, L, dim, seed);

  std::mt19937_64 rng(seed + 1);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> x0(dim);
  for (double& v : x0) v = gauss(rng);

  CsvBuilder csv;
  csv.param("method", method);
  csv.param("problem", obj.name);
  csv.param("dim", std::to_string(dim));
  csv.param("m", m);
  csv.param("L", L);
  csv.param("seed", std::to_string(seed));
  json j;
  json jrows = json::array();

  if (method == "ode") {
    csv.param("b_bar", b_bar);
    csv.param("t_end", t_end);
    const ContinuousCertificate cert = certify_ode(m, b_bar);
    std::vector<double> xdot0(dim, 0.0);
    if (verbose) std::cerr << "simulate: integrating ODE to t = " << t_end << "\n";
    const OdeTrajectory traj =
        run_ode(obj, OdeParams{b_bar, m}, x0, xdot0, t_end, 0.0, &cert);
    const double cbar = cert.bound_constant(traj.f_gap[0], x0, xdot0, obj.x_star);
    csv.header({"t", "f_gap", "lyap_rel", "bound"});
    for (std::size_t i = 0; i < traj.t.size(); ++i) {
      const double bound = cbar * std::exp(-cert.lambda * traj.t[i]);
      csv.row({fmt(traj.t[i]), fmt(traj.f_gap[i]), fmt(traj.lyap_rel[i]), fmt(bound)});
      jrows.push_back({{"t", traj.t[i]},
                       {"f_gap", traj.f_gap[i]},
                       {"lyap_rel", traj.lyap_rel[i]},
                       {"bound", bound}});
    }
    csv.note("max_monotonicity_violation_rel", fmt(traj.max_violation_rel));
    j["summary"] = {{"max_monotonicity_violation_rel", traj.max_violation_rel}};
    if (traj.diverged) {
      csv.note("diverged", "1");
      out.write(format == "json" ? j.dump(2) + "\n" : csv.str());
      return kExitNumerical;
    }
  } else {
    MethodParams mp{};
    const DiscreteCertificate* cert_ptr = nullptr;
    DiscreteCertificate cert;
    if (method == "nesterov" || method == "gd") {
      if (optimal || (!alpha && !beta)) {
        mp = method == "gd" ? MethodParams{1.0 / L, 0.0, 0.0} : optimal_params(pc);
      } else {
        const double a = alpha.value_or(1.0 / L);
        const double b = method == "gd" ? 0.0 : beta.value_or(0.0);
        mp = MethodParams{a, b, b};
      }
      cert = certify(pc, mp);
      cert_ptr = &cert;
    } else if (method == "heavyball") {
      const double a = alpha.value_or(1.0 / L);
      const double delta = std::sqrt(m * a);
      const double b = beta.value_or(1.0 - 2.0 * delta);
      mp = MethodParams{a, b, 0.0};
    } else {
      throw std::invalid_argument("unknown --method: " + method);
    }
    csv.param("alpha", mp.alpha);
    csv.param("beta", mp.beta);
    csv.param("gamma", mp.gamma);
    csv.param("steps", std::to_string(steps));
    if (verbose) std::cerr << "simulate: running " << steps << " steps\n";

    const DiscreteTrajectory traj = run_method(obj, mp, x0, x0, steps, cert_ptr);
    if (cert_ptr) {
      const double c0 = cert.bound_constant(traj.f_gap[0], x0, x0, obj.x_star);
      const double log_rho_sq = cert.rho_sq > 0.0 ? std::log(cert.rho_sq) : 0.0;
      csv.header({"k", "f_gap", "lyap_rel", "bound"});
      for (std::size_t k = 0; k < traj.f_gap.size(); ++k) {
        const double bound =
            cert.rho_sq > 0.0
                ? c0 * std::exp(static_cast<double>(k) * log_rho_sq)
                : (k == 0 ? c0 : 0.0);
        csv.row({std::to_string(k), fmt(traj.f_gap[k]), fmt(traj.lyap_rel[k]), fmt(bound)});
        jrows.push_back({{"k", k},
                         {"f_gap", traj.f_gap[k]},
                         {"lyap_rel", traj.lyap_rel[k]},
                         {"bound", bound}});
      }
      csv.note("max_monotonicity_violation_rel", fmt(traj.max_violation_rel));
      j["summary"] = {{"max_monotonicity_violation_rel", traj.max_violation_rel}};
    } else {
      // No certificate of the assumed form exists for Heavy Ball at
      // accelerated step sizes; only the raw gap column is produced.
      csv.header({"k", "f_gap"});
      for (std::size_t k = 0; k < traj.f_gap.size(); ++k) {
        csv.row({std::to_string(k), fmt(traj.f_gap[k])});
        jrows.push_back({{"k", k}, {"f_gap", traj.f_gap[k]}});
      }
      csv.note("lyap_column", "absent");
      j["summary"] = {{"lyap_column", "absent"}};
    }
    if (traj.diverged) {
      csv.note("diverged_at", std::to_string(traj.last_finite));
      out.write(format == "json" ? j.dump(2) + "\n" : csv.str());
      return kExitNumerical;
    }
  }

  if (format == "json") {
    j["rows"] = jrows;
    out.write(j.dump(2) + "\n");
  } else {
    out.write(csv.str());
  }
  return 0;
}

int cmd_hb_scan(double kappa, double c, std::size_t samples, bool gamma_equals_beta,
                std::uint64_t seed, const Output& out, bool verbose) {
  if (verbose) std::cerr << "hb-scan: " << samples << " samples at kappa " << kappa << "\n";
  const ScanReport rep = scan_feasibility(kappa, c, samples, seed, gamma_equals_beta);
  json j;
  j["kappa"] = rep.kappa;
  j["c"] = rep.c;
  j["delta"] = rep.delta;
  j["alpha"] = rep.alpha;
  j["beta"] = rep.beta;
  j["gamma"] = rep.gamma;
  j["samples"] = rep.samples;
  j["seed"] = rep.seed;
  j["control_gamma_eq_beta"] = rep.control_gamma_eq_beta;
  j["min_lambda_max"] = rep.min_lambda_max;
  j["witness_rho_sq"] = rep.witness_rho_sq;
  j["witness_p_hat"] = {{"p11", rep.witness_p_hat.a11},
                        {"p12", rep.witness_p_hat.a12},
                        {"p22", rep.witness_p_hat.a22}};
  j["feasible"] = rep.feasible;
  j["obstruction_value"] = rep.obstruction_value;
  j["note"] = "sampled evidence; the obstruction value is the exact h->0 statement";
  out.write(j.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lyapunov rate certificates for momentum methods and their limiting ODE"};
  app.require_subcommand(1);
  app.fallthrough();

  // certify
  auto* certify_cmd = app.add_subcommand("certify", "certify a gamma = beta method");
  double m = 1.0, L = 100.0;
  std::optional<double> alpha, beta;
  bool optimal = false;
  std::string format = "json", out_path;
  certify_cmd->add_option("--m", m, "strong-convexity modulus")->required();
  certify_cmd->add_option("--L", L, "smoothness constant")->required();
  certify_cmd->add_option("--alpha", alpha, "step size");
  certify_cmd->add_option("--beta", beta, "momentum coefficient");
  certify_cmd->add_flag("--optimal", optimal, "use the best-rate parameters");
  certify_cmd->add_option("--format", format, "json|csv")->default_val("json");
  certify_cmd->add_option("--out", out_path, "output path (default stdout)");

  // curve
  auto* curve_cmd = app.add_subcommand("curve", "sample the rate-momentum curve");
  double delta = 0.5;
  int samples = 200;
  std::optional<double> b_lo, b_hi;
  std::string curve_format = "csv", curve_out;
  curve_cmd->add_option("--delta", delta, "step scale in [0,1); 0 = ODE curve")->required();
  curve_cmd->add_option("--samples", samples, "number of grid rows")->default_val(200);
  curve_cmd->add_option("--b-lo", b_lo, "left end of the momentum grid");
  curve_cmd->add_option("--b-hi", b_hi, "right end of the momentum grid");
  curve_cmd->add_option("--format", curve_format, "csv|json")->default_val("csv");
  curve_cmd->add_option("--out", curve_out, "output path (default stdout)");

  // table
  auto* table_cmd = app.add_subcommand("table", "best ODE rates per condition number");
  std::string kappas = "1e1,1e2,1e3,1e4,1e5,1e6,1e7,1e8,1e9";
  std::string table_format = "csv", table_out;
  table_cmd->add_option("--kappas", kappas, "comma list of condition numbers")
      ->default_val(kappas);
  table_cmd->add_option("--format", table_format, "csv|json")->default_val("csv");
  table_cmd->add_option("--out", table_out, "output path (default stdout)");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "run a method or the ODE");
  std::string method = "nesterov", problem = "quadratic";
  int dim = 10, steps = 500;
  double t_end = 10.0, b_bar = 2.0;
  double sim_m = 1.0, sim_L = 100.0;
  std::optional<double> sim_alpha, sim_beta;
  bool sim_optimal = false;
  std::uint64_t seed = default_seed();
  std::string sim_format = "csv", sim_out;
  sim_cmd->add_option("--method", method, "nesterov|gd|heavyball|ode")->required();
  sim_cmd->add_option("--problem", problem, "quadratic|softplus")->default_val("quadratic");
  sim_cmd->add_option("--dim", dim, "dimension")->default_val(10);
  sim_cmd->add_option("--m", sim_m, "strong-convexity modulus")->default_val(1.0);
  sim_cmd->add_option("--L", sim_L, "smoothness constant")->default_val(100.0);
  sim_cmd->add_option("--steps", steps, "discrete steps")->default_val(500);
  sim_cmd->add_option("--t-end", t_end, "ODE horizon")->default_val(10.0);
  sim_cmd->add_option("--alpha", sim_alpha, "step size");
  sim_cmd->add_option("--beta", sim_beta, "momentum coefficient");
  sim_cmd->add_flag("--optimal", sim_optimal, "use the best-rate parameters");
  sim_cmd->add_option("--b-bar", b_bar, "ODE friction coefficient")->default_val(2.0);
  sim_cmd->add_option("--seed", seed, "RNG seed (default LYAPCERT_SEED or 42)");
  sim_cmd->add_option("--format", sim_format, "csv|json")->default_val("csv");
  sim_cmd->add_option("--out", sim_out, "output path (default stdout)");

  // hb-scan
  auto* scan_cmd = app.add_subcommand("hb-scan", "feasibility scan for Heavy Ball");
  double scan_kappa = 1e4, scan_c = 1.0;
  std::size_t scan_samples = 100000;
  bool scan_control = false;
  std::uint64_t scan_seed = default_seed();
  std::string scan_out;
  scan_cmd->add_option("--kappa", scan_kappa, "condition number")->required();
  scan_cmd->add_option("--c", scan_c, "step-scale constant")->default_val(1.0);
  scan_cmd->add_option("--samples", scan_samples, "sample count")->default_val(100000);
  scan_cmd->add_flag("--gamma-equals-beta", scan_control, "control scan with gamma = beta");
  scan_cmd->add_option("--seed", scan_seed, "RNG seed (default LYAPCERT_SEED or 42)");
  scan_cmd->add_option("--out", scan_out, "output path (default stdout)");

  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "one log line per major stage to stderr");

  CLI11_PARSE(app, argc, argv);

  try {
    if (certify_cmd->parsed()) {
      return cmd_certify(m, L, alpha, beta, optimal, format, Output{out_path});
    }
    if (curve_cmd->parsed()) {
      return cmd_curve(delta, samples, b_lo, b_hi, curve_format, Output{curve_out});
    }
    if (table_cmd->parsed()) {
      return cmd_table(kappas, table_format, Output{table_out}, verbose);
    }
    if (sim_cmd->parsed()) {
      return cmd_simulate(method, problem, dim, sim_m, sim_L, steps, t_end, sim_alpha,
                          sim_beta, sim_optimal, b_bar, seed, sim_format, Output{sim_out},
                          verbose);
    }
    if (scan_cmd->parsed()) {
      return cmd_hb_scan(scan_kappa, scan_c, scan_samples, scan_control, scan_seed,
                         Output{scan_out}, verbose);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadParams;
  } catch (const std::runtime_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
