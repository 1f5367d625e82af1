#pragma once

#include <array>

#include "lyapcert/model.hpp"
#include "lyapcert/sym.hpp"

namespace lyapcert {

/// Kronecker factors of the state-space form (A, B, C, E) over the state
/// [d^T, x^T]^T, where d_k = (x_k - x_{k-1}) / delta. Expanding each factor
/// by ⊗ I_dim recovers the full matrices for dim decision variables.
struct StateSpaceHat {
  std::array<std::array<double, 2>, 2> A;
  std::array<double, 2> B;
  std::array<double, 2> C;
  std::array<double, 2> E;
};

/// Scalar weights of the certificate LMIs. a0 is fixed to 1 by homogeneity;
/// ell (discrete) and sigma (continuous) default to 0.
struct LmiKnobs {
  double a0 = 1.0;
  double ell = 0.0;
  double rho_sq = 1.0;
  double lambda = 0.0;
  double sigma = 0.0;
};

/// State-space factors for the three-parameter family; gamma is the
/// extrapolation coefficient (gamma = beta gives the Nesterov family,
/// gamma = 0 the Heavy Ball method).
StateSpaceHat state_space_hat(const NondimParams& nd, double gamma, double alpha);

/// Generic assembly of the discrete certificate matrix factor
///   T = M0 + a0 rho^2 M1 + a0 (1 - rho^2) M2 + ell M3
/// from the state-space factors, valid for any member of the family.
Sym3 discrete_t_hat(const StateSpaceHat& ss, const Sym2& p_hat, const LmiKnobs& knobs,
                    const ProblemClass& pc);

/// Closed-form entries of the same factor for the gamma = beta family.
Sym3 discrete_t_hat_direct(const NondimParams& nd, double alpha, const Sym2& p_hat,
                           double rho_sq, const ProblemClass& pc);

/// Continuous certificate matrix factor
///   Tbar = M0 + M1 + lambda M2 + sigma M3
/// for the first-order system v' = -b_bar sqrt(m) v - grad f(x)/sqrt(m),
/// x' = sqrt(m) v. pc.L only enters through the sigma terms.
Sym3 continuous_t_hat(const OdeParams& ode, const Sym2& p_bar_hat, double lambda,
                      double sigma, const ProblemClass& pc);

}  // namespace lyapcert
