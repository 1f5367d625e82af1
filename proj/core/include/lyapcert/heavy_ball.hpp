#pragma once

#include <cstddef>
#include <cstdint>

#include "lyapcert/model.hpp"
#include "lyapcert/sym.hpp"

namespace lyapcert {

/// The (1,1) certificate entry for the Heavy Ball method (gamma = 0):
///   (beta^2 - rho^2) p11 + 2 delta beta^2 p12 + delta^2 beta^2 p22
///   + delta^2 (L - m) beta^2 / 2.
/// The (L - m) term is the obstruction that rules out accelerated
/// certificates.
double t11_heavy_ball(const Sym2& p_hat, double rho_sq, double delta, double beta,
                      const ProblemClass& pc);

/// Same entry for the full three-parameter family; reduces to the Heavy Ball
/// form at gamma = 0 and to the gamma = beta closed form at gamma = beta.
double t11_three_param(const Sym2& p_hat, double rho_sq, double delta, double beta,
                       double gamma, const ProblemClass& pc);

/// Outcome of a randomized feasibility scan over (P_hat >= 0, rho^2 in [0,1))
/// at the accelerated step scale delta = 0.9 c / sqrt(kappa), beta = 1 - 2 delta.
/// A positive min_lambda_max over all samples is evidence (not a proof) that
/// no certificate of the assumed form exists; the h -> 0 obstruction value is
/// the accompanying exact statement.
struct ScanReport {
  double kappa = 0.0;
  double c = 0.0;
  double delta = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  bool control_gamma_eq_beta = false;
  double min_lambda_max = 0.0;   // least largest-eigenvalue of T_hat found
  double witness_rho_sq = 0.0;   // sample attaining it
  Sym2 witness_p_hat;
  bool feasible = false;         // min_lambda_max <= tolerance
  double obstruction_value = 0.0;
};

ScanReport scan_feasibility(double kappa, double c, std::size_t n_samples,
                            std::uint64_t seed = 42, bool gamma_equals_beta = false);

/// The h -> 0 limit of delta^{-1} t11 along a Heavy Ball discretization with
/// friction b_bar and certificate data (lambda, Pbar):
///   -2 (b_bar - lambda)/sqrt(m) p11 + 2 p12 + (c/2) sqrt(m/L) (L - m).
/// Positivity witnesses that t11 <= 0 cannot hold for large L.
double limit_obstruction(double b_bar, double lambda, const Sym2& p_bar_hat, double c,
                         const ProblemClass& pc);

}  // namespace lyapcert
