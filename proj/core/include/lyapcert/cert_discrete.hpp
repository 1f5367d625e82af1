#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "lyapcert/lmi.hpp"
#include "lyapcert/model.hpp"
#include "lyapcert/sym.hpp"

namespace lyapcert {

/// Value of the cubic linking the certified rate variable r to the momentum
/// variable b at step scale delta:
///   (r+delta)(1-delta^2) b^2 - 2(1+r^2)(1-delta^2) b + r^3 - 3r^2 delta + 3r - delta.
double rate_curve(double r, double b, double delta);

/// The unique real r with rate_curve(r, b, delta) = 0, delta in (0, 1].
/// r > 0 exactly when b lies in the open momentum window.
/// Bracketing scan plus bisection; throws std::runtime_error on the
/// (unreachable) failure to bracket.
double solve_rate(double b, double delta);

/// The two momentum values certifying a given rate r.
struct BRoots {
  bool real = false;  // false when 1 - r^2 < 0 (no real roots)
  double b_minus = 0.0;
  double b_plus = 0.0;
  bool double_root = false;
};
BRoots momentum_roots(double r, double delta);

/// Window of momentum values with positive certified rate, and the
/// symmetric beta bounds accepted by certify().
struct BWindow {
  double b_min, b_max;
  double beta_min, beta_max;
};
BWindow momentum_window(double delta);

/// The rank-one certificate matrix factor
///   (m/2) [ (1-r delta)^2, r (1-r delta); r (1-r delta), r^2 ].
Sym2 certificate_p_hat(double r, double delta, double m);

/// A validated rate certificate for a gamma = beta method.
struct DiscreteCertificate {
  ProblemClass problem;
  MethodParams params;
  NondimParams nd;      // delta, b, and the certified r
  double rho_sq;        // 1 - r delta
  Sym2 p_hat;
  Sym3 t_hat;
  bool valid;

  /// The constant C with  f(x_k) - f* <= C rho^{2k}:
  ///   C = f(x0) - f* + (m/2) || (1-r delta)/delta (x0 - x_minus1) + r (x0 - x*) ||^2.
  double bound_constant(double f_gap0, std::span<const double> x0,
                        std::span<const double> x_minus1,
                        std::span<const double> x_star) const;
};

/// Builds the certificate for a gamma = beta method. Requires
/// alpha <= 1/L and |beta| <= sqrt(1 - m alpha); throws
/// std::invalid_argument naming the violated inequality otherwise.
DiscreteCertificate certify(const ProblemClass& pc, const MethodParams& mp);

/// alpha = 1/L, beta = gamma = (1 - sqrt(m/L)) / (1 + sqrt(m/L)); certifying
/// the result yields rho^2 = 1 - sqrt(1/kappa).
MethodParams optimal_params(const ProblemClass& pc);

/// Random probe of the linearized feasibility constraints around the
/// standard-choice certificate at step scale delta = sqrt(m/L). A feasible
/// strictly-improving increment would contradict local optimality; the
/// report counts how many samples found one (expected: none).
struct ProbeReport {
  double delta;
  double radius;
  double tol;
  std::size_t samples;
  std::size_t improving_feasible;
};
ProbeReport probe_local_optimality(double delta, std::size_t n_samples, double radius,
                                   double tol, std::uint64_t seed = 42);

/// The three linearized constraints at increment (sigma~, p11~, p12~, p22~);
/// exposed for direct edge-case checks.
bool probe_constraints_hold(double delta, double sigma_inc, double p11_inc,
                            double p12_inc, double p22_inc);

}  // namespace lyapcert
