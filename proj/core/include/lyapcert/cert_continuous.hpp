#pragma once

#include <span>

#include "lyapcert/lmi.hpp"
#include "lyapcert/model.hpp"
#include "lyapcert/sym.hpp"

namespace lyapcert {

/// Value of the cubic linking the ODE rate variable r_bar to the friction
/// b_bar:  r b^2 - 2 (r^2 + 1) b + r^3 + 3 r.
double rate_curve_ode(double r_bar, double b_bar);

/// The unique real root r_bar of rate_curve_ode(., b_bar); lies in (0, 1]
/// for b_bar > 0 and is odd in b_bar.
double solve_rate_ode(double b_bar);

/// A validated decay certificate for the damped-oscillator system.
struct ContinuousCertificate {
  double m;
  double b_bar;
  double r_bar;
  double lambda;  // sqrt(m) r_bar
  double s_bar;   // smoothness-constraint weight over sqrt(m); 0 on the plain path
  double sigma;   // sqrt(m) s_bar
  Sym2 p_bar_hat;
  Sym3 t_bar_hat;
  bool valid;

  /// The constant Cbar with  f(x(t)) - f* <= Cbar exp(-lambda t):
  ///   Cbar = f(x(0)) - f* + (m/2) || xdot(0)/sqrt(m) + r_bar (x(0) - x*) ||^2.
  double bound_constant(double f_gap0, std::span<const double> x0,
                        std::span<const double> xdot0,
                        std::span<const double> x_star) const;
};

/// Certificate with rate lambda = sqrt(m) solve_rate_ode(b_bar) and the
/// rank-one matrix (m/2) [1, r; r, r^2]. b_bar = 0 yields the degenerate
/// lambda = 0 certificate whose bracketed quantity is a conserved energy;
/// b_bar < 0 is rejected.
ContinuousCertificate certify_ode(double m, double b_bar);

/// Numerical check that the constructed (rate, matrix) pair is a local
/// optimum of the rate for fixed b_bar > 0 (m normalized to 1):
///  - det_minor:        t11 t22 - t12^2 at the constructed point (expect 0),
///  - multiplier_poly:  -2 r^3 + 3 b r^2 - (3 + b^2) r + b, whose negativity
///                      yields positive KKT multipliers (expect < 0),
///  - identity_residual: residual of
///                      multiplier_poly + rate_curve_ode = (r^2 - 1) b - r^3.
struct OdeOptimality {
  double r_star;
  double det_minor;
  double multiplier_poly;
  double identity_residual;
};
OdeOptimality optimality_check_ode(double b_bar);

/// The curve F(r_bar, s_bar; kappa) = 0 traced when the smoothness constant
/// enters the certificate through a weight s_bar > 0:
///   F = r^2 s (r+s)^2 / (2(k+1) r + 4 k s)
///     - (1/4) ((k+1) r (r+s)^2 / ((k+1) r + 2 k s) - 1)^2.
/// Computed in a cancellation-free form; pole inputs are rejected.
double sigma_curve(double r_bar, double s_bar, double kappa);

/// Analytic partial derivatives of sigma_curve.
void sigma_curve_grad(double r_bar, double s_bar, double kappa, double* df_dr,
                      double* df_ds);

/// Certificate data at a point of the sigma_curve:
///   p22/m = 1/2 + (s/r) k/(k+1),  p12/m = (r+s)/2,  p11/m = (p12/m)^2 / (p22/m),
///   b_bar = r + (p22/m)/(p12/m).
struct SigmaConstruction {
  double p11_over_m;
  double p12_over_m;
  double p22_over_m;
  double b_bar;
};
SigmaConstruction sigma_construct(double r_bar, double s_bar, double kappa);

/// A traced point on sigma_curve = 0 with its certificate data.
struct SigmaCurvePoint {
  double kappa;
  double r_bar;
  double s_bar;
  double b_bar;
  double p11_over_m;
  double p12_over_m;
  double p22_over_m;
};

/// Pseudo-arclength continuation of sigma_curve = 0 from (1, 0), following
/// the branch with increasing r_bar, and returns the point of largest r_bar
/// (the fold, located by tangent sign change and golden-section refinement).
/// Requires kappa > 1. Throws std::runtime_error (with the last good point
/// in the message) if the corrector stalls before a fold is found.
SigmaCurvePoint max_rate_point(double kappa);

}  // namespace lyapcert
