#include "lyapcert/heavy_ball.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "lyapcert/cert_continuous.hpp"
#include "lyapcert/cert_discrete.hpp"
#include "lyapcert/lmi.hpp"

namespace lyapcert {

double t11_heavy_ball(const Sym2& p_hat, double rho_sq, double delta, double beta,
                      const ProblemClass& pc) {
  const double b2 = beta * beta;
  return (b2 - rho_sq) * p_hat.a11 + 2.0 * delta * b2 * p_hat.a12 +
         delta * delta * b2 * p_hat.a22 + delta * delta * (pc.L - pc.m) * b2 / 2.0;
}

double t11_three_param(const Sym2& p_hat, double rho_sq, double delta, double beta,
                       double gamma, const ProblemClass& pc) {
  const double b2 = beta * beta;
  const double bg = beta - gamma;
  return (b2 - rho_sq) * p_hat.a11 + 2.0 * delta * b2 * p_hat.a12 +
         delta * delta * b2 * p_hat.a22 + delta * delta * (pc.L - pc.m) * bg * bg / 2.0 -
         pc.m * gamma * gamma * delta * delta / 2.0;
}

double limit_obstruction(double b_bar, double lambda, const Sym2& p_bar_hat, double c,
                         const ProblemClass& pc) {
  const double sm = std::sqrt(pc.m);
  return -2.0 * (b_bar - lambda) / sm * p_bar_hat.a11 + 2.0 * p_bar_hat.a12 +
         (c / 2.0) * std::sqrt(pc.m / pc.L) * (pc.L - pc.m);
}

ScanReport scan_feasibility(double kappa, double c, std::size_t n_samples,
                            std::uint64_t seed, bool gamma_equals_beta) {
  if (!(kappa >= 1.0)) throw std::invalid_argument("scan_feasibility requires kappa >= 1");
  if (!(c > 0.0)) throw std::invalid_argument("scan_feasibility requires c > 0");

  const ProblemClass pc = validate_problem(1.0, kappa);
  const double delta = 0.9 * c / std::sqrt(kappa);
  const double alpha = delta * delta / pc.m;
  const double beta = 1.0 - 2.0 * delta;  // friction b_bar ~ 2 discretization
  const double gamma = gamma_equals_beta ? beta : 0.0;

  ScanReport report;
  report.kappa = kappa;
  report.c = c;
  report.delta = delta;
  report.alpha = alpha;
  report.beta = beta;
  report.gamma = gamma;
  report.samples = n_samples;
  report.seed = seed;
  report.control_gamma_eq_beta = gamma_equals_beta;

  const NondimParams nd{delta, (1.0 - beta) / delta, 0.0};
  const StateSpaceHat ss = state_space_hat(nd, gamma, alpha);

  double best = std::numeric_limits<double>::infinity();
  Sym2 best_p;
  double best_rho_sq = 1.0;
  double best_scale = 1.0;

  auto consider = [&](const Sym2& p, double rho_sq) {
    if (!is_positive_semidefinite(p)) return;
    LmiKnobs knobs;
    knobs.rho_sq = rho_sq;
    const Sym3 t = discrete_t_hat(ss, p, knobs, pc);
    const double lam_max = eigenvalues(t)[2];
    if (lam_max < best) {
      best = lam_max;
      best_p = p;
      best_rho_sq = rho_sq;
      best_scale = std::max(1.0, t.max_abs());
    }
  };

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif01(0.0, 1.0);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double g11 = gauss(rng), g12 = gauss(rng), g21 = gauss(rng), g22 = gauss(rng);
    const double u = 10.0 * unif01(rng);
    // P = u m G'G, a dense sample of the PSD cone at certificate scale.
    const Sym2 p{u * pc.m * (g11 * g11 + g21 * g21), u * pc.m * (g11 * g12 + g21 * g22),
                 u * pc.m * (g12 * g12 + g22 * g22)};
    const double r = 1.0 - unif01(rng);  // (0, 1]
    consider(p, 1.0 - r * delta);
  }

  if (gamma_equals_beta) {
    // The analytic certificate is a deterministic witness for the control.
    const double r = solve_rate(nd.b, delta);
    consider(certificate_p_hat(r, delta, pc.m), 1.0 - r * delta);
  }

  report.min_lambda_max = best;
  report.witness_p_hat = best_p;
  report.witness_rho_sq = best_rho_sq;
  report.feasible = best <= kDefiniteTol * best_scale;

  const ContinuousCertificate ode_cert = certify_ode(pc.m, 2.0);
  report.obstruction_value =
      limit_obstruction(2.0, ode_cert.lambda, ode_cert.p_bar_hat, c, pc);
  return report;
}

}  // namespace lyapcert
