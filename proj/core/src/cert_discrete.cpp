#include "lyapcert/cert_discrete.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "root_scan.hpp"

namespace lyapcert {

double rate_curve(double r, double b, double delta) {
  const double one_minus_d2 = 1.0 - delta * delta;
  return (r + delta) * one_minus_d2 * b * b - 2.0 * (1.0 + r * r) * one_minus_d2 * b +
         (r * r * r - 3.0 * r * r * delta + 3.0 * r - delta);
}

namespace {

double rate_curve_dr(double r, double b, double delta) {
  const double one_minus_d2 = 1.0 - delta * delta;
  return one_minus_d2 * b * b - 4.0 * r * one_minus_d2 * b +
         (3.0 * r * r - 6.0 * r * delta + 3.0);
}

}  // namespace

double solve_rate(double b, double delta) {
  if (!(delta > 0.0) || delta > 1.0) {
    throw std::invalid_argument("solve_rate requires delta in (0, 1]");
  }
  if (delta == 1.0) {
    // The b terms carry 1 - delta^2 and drop out; the curve collapses to
    // (r - 1)^3, whose evaluated form is pure cancellation noise near the
    // root.
    return 1.0;
  }
  // The cubic in r has exactly one real root for every real b; certified
  // rates satisfy |r| <= 1, and below b = -2 delta/(1 - delta^2) the root
  // crosses to r < -delta, so the scan covers both sides.
  const double span = std::max({2.0, 2.0 / delta, std::fabs(b)});
  return detail::solve_unique_root([&](double r) { return rate_curve(r, b, delta); },
                                   [&](double r) { return rate_curve_dr(r, b, delta); },
                                   -span, span, "solve_rate");
}

BRoots momentum_roots(double r, double delta) {
  if (r == -delta) {
    throw std::invalid_argument("momentum_roots: r = -delta is the curve's asymptote");
  }
  const double one_minus_d2 = 1.0 - delta * delta;
  const double disc = (1.0 - r * r) * one_minus_d2;
  BRoots out;
  const double scale = std::max(1.0, r * r * one_minus_d2);
  if (disc < -1e-14 * scale) {
    return out;  // complex pair, reported as no real roots
  }
  out.real = true;
  const double denom = (r + delta) * one_minus_d2;
  const double mid = (1.0 + r * r) * one_minus_d2;
  if (disc < 1e-14 * scale) {
    out.double_root = true;
    out.b_minus = out.b_plus = mid / denom;
    return out;
  }
  const double rad = (1.0 - r * delta) * std::sqrt(disc);
  out.b_minus = (mid - rad) / denom;
  out.b_plus = (mid + rad) / denom;
  if (out.b_minus > out.b_plus) std::swap(out.b_minus, out.b_plus);
  return out;
}

BWindow momentum_window(double delta) {
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw std::invalid_argument("momentum_window requires delta in (0, 1)");
  }
  const double one_minus_d2 = 1.0 - delta * delta;
  const double root = std::sqrt(one_minus_d2);
  BWindow w;
  w.b_min = (one_minus_d2 - root) / (delta * one_minus_d2);
  w.b_max = (one_minus_d2 + root) / (delta * one_minus_d2);
  w.beta_min = -root;
  w.beta_max = root;
  return w;
}

Sym2 certificate_p_hat(double r, double delta, double m) {
  const double u = 1.0 - r * delta;
  return Sym2{(m / 2.0) * u * u, (m / 2.0) * r * u, (m / 2.0) * r * r};
}

double DiscreteCertificate::bound_constant(double f_gap0, std::span<const double> x0,
                                           std::span<const double> x_minus1,
                                           std::span<const double> x_star) const {
  const double coef = (1.0 - nd.r * nd.delta) / nd.delta;
  double sq = 0.0;
  for (std::size_t i = 0; i < x0.size(); ++i) {
    const double w = coef * (x0[i] - x_minus1[i]) + nd.r * (x0[i] - x_star[i]);
    sq += w * w;
  }
  return f_gap0 + (problem.m / 2.0) * sq;
}

DiscreteCertificate certify(const ProblemClass& pc, const MethodParams& mp) {
  if (mp.gamma != mp.beta) {
    throw std::invalid_argument(
        "certify requires the gamma = beta family (got gamma != beta)");
  }
  if (!(mp.alpha > 0.0)) {
    throw std::invalid_argument("certify requires alpha > 0");
  }
  if (mp.alpha > 1.0 / pc.L) {
    throw std::invalid_argument("certify requires alpha <= 1/L (got alpha = " +
                                std::to_string(mp.alpha) + ", 1/L = " +
                                std::to_string(1.0 / pc.L) + ")");
  }
  const double beta_bound = std::sqrt(1.0 - pc.m * mp.alpha);
  if (std::fabs(mp.beta) > beta_bound) {
    throw std::invalid_argument(
        "certify requires |beta| <= sqrt(1 - m*alpha) (got beta = " +
        std::to_string(mp.beta) + ", bound = " + std::to_string(beta_bound) + ")");
  }

  NondimParams nd = nondimensionalize(pc, mp);
  nd.r = solve_rate(nd.b, nd.delta);
  const double rho_sq = 1.0 - nd.r * nd.delta;

  DiscreteCertificate cert;
  cert.problem = pc;
  cert.params = mp;
  cert.nd = nd;
  cert.rho_sq = rho_sq;
  cert.p_hat = certificate_p_hat(nd.r, nd.delta, pc.m);
  cert.t_hat = discrete_t_hat_direct(nd, mp.alpha, cert.p_hat, rho_sq, pc);
  cert.valid = is_negative_semidefinite(cert.t_hat) && is_positive_semidefinite(cert.p_hat);
  return cert;
}

MethodParams optimal_params(const ProblemClass& pc) {
  const double root = std::sqrt(pc.m / pc.L);
  const double beta = (1.0 - root) / (1.0 + root);
  return MethodParams{1.0 / pc.L, beta, beta};
}

bool probe_constraints_hold(double delta, double sigma_inc, double p11_inc,
                            double p12_inc, double p22_inc) {
  // Linearized determinant constraint of P >= 0 at the rank-one optimum.
  const double c1 =
      p11_inc - 2.0 * (1.0 - delta) * p12_inc + (1.0 - delta) * (1.0 - delta) * p22_inc;
  // Quadratic-order constraint from t22 t33 - t23^2 >= 0 (m normalized to 1).
  const double q = 0.5 * sigma_inc + delta * p12_inc + delta * delta * p22_inc;
  const double c2 = -q * q + delta * delta * delta * p22_inc *
                                 (p11_inc + 2.0 * delta * p12_inc + delta * delta * p22_inc);
  // t22 <= 0 linearized.
  return c1 >= 0.0 && c2 >= 0.0 && p22_inc <= 0.0;
}

ProbeReport probe_local_optimality(double delta, std::size_t n_samples, double radius,
                                   double tol, std::uint64_t seed) {
  if (n_samples == 0) {
    throw std::invalid_argument("probe_local_optimality requires n_samples >= 1");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  ProbeReport report{delta, radius, tol, n_samples, 0};
  for (std::size_t i = 0; i < n_samples; ++i) {
    // Uniform in the 4-ball of the given radius, then fold sigma~ to <= 0.
    double v[4];
    double norm_sq = 0.0;
    for (double& x : v) {
      x = gauss(rng);
      norm_sq += x * x;
    }
    const double scale =
        radius * std::pow(unif(rng), 0.25) / std::sqrt(std::max(norm_sq, 1e-300));
    for (double& x : v) x *= scale;
    const double sigma_inc = -std::fabs(v[0]);

    if (sigma_inc < -tol && probe_constraints_hold(delta, sigma_inc, v[1], v[2], v[3])) {
      ++report.improving_feasible;
    }
  }
  return report;
}

}  // namespace lyapcert
