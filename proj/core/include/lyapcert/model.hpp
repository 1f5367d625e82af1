#pragma once

#include <cmath>

namespace lyapcert {

/// A minimization problem class: m-strongly convex, L-smooth objectives.
struct ProblemClass {
  double m;      // strong-convexity modulus
  double L;      // gradient Lipschitz constant
  double kappa;  // condition number L/m
};

/// Validates 0 < m <= L (both finite) and returns the class with kappa = L/m.
/// Throws std::invalid_argument otherwise.
ProblemClass validate_problem(double m, double L);

/// Parameters of the two-step first-order family
///   x_{k+1} = x_k + beta (x_k - x_{k-1}) - alpha grad f(y_k),
///   y_k     = x_k + gamma (x_k - x_{k-1}).
struct MethodParams {
  double alpha;  // step size, > 0
  double beta;   // momentum coefficient
  double gamma;  // extrapolation coefficient

  bool is_nesterov() const { return gamma == beta; }
  bool is_heavy_ball() const { return gamma == 0.0 && beta != 0.0; }
  bool is_gradient_descent() const { return beta == 0.0 && gamma == 0.0; }
};

/// Scale-free coordinates of the certificate algebra:
///   delta = sqrt(m alpha),  beta = 1 - b delta,  rho^2 = 1 - r delta.
/// r = 0 until a certified rate is attached.
struct NondimParams {
  double delta;
  double b;
  double r = 0.0;

  double beta() const { return 1.0 - b * delta; }
  double rho_sq() const { return 1.0 - r * delta; }
};

/// Maps method parameters to the nondimensional coordinates. Requires alpha > 0.
NondimParams nondimensionalize(const ProblemClass& pc, const MethodParams& mp);

/// Inverse of nondimensionalize for the gamma = beta family.
MethodParams method_params(const NondimParams& nd, double m);

/// The damped-oscillator system  x'' + b_bar sqrt(m) x' + grad f(x) = 0.
struct OdeParams {
  double b_bar;  // friction coefficient
  double m;      // strong-convexity modulus of the objective
};

}  // namespace lyapcert
