#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "lyapcert/cert_continuous.hpp"
#include "lyapcert/cert_discrete.hpp"
#include "lyapcert/model.hpp"

namespace lyapcert {

/// A test objective with known class constants and minimizer.
struct Objective {
  int dim = 0;
  double m = 0.0;
  double L = 0.0;
  std::vector<double> x_star;
  double f_star = 0.0;
  std::function<double(std::span<const double>)> value;
  std::function<void(std::span<const double>, std::span<double>)> gradient;
  std::string name;
};

/// f(x) = x' D x / 2 with D diagonal, eigenvalues log-uniform in [m, L];
/// endpoints are forced for dim >= 2. Minimizer 0, minimum 0.
Objective make_quadratic(double m, double L, int dim, std::uint64_t seed);

/// f(x) = (m/2)||x||^2 + 4(L-m) sum_i ln(1 + e^{x_i}); separable, with
/// per-coordinate Hessian in (m, L]. The minimizer solves
/// m x + 4(L-m)/(1+e^{-x}) = 0 per coordinate (safeguarded Newton).
Objective make_softplus_composite(double m, double L, int dim);

/// Iterate history of a discrete run. The Lyapunov column is stored relative
/// to its initial value and evaluated in log space, so the rho^{-2k} weight
/// never overflows. Once the bracket decays to gap_noise (the roundoff floor
/// of evaluating f - f*, nonzero whenever f* != 0), the weighted column
/// amplifies that roundoff rather than anything about the method; entries are
/// still recorded but the violation metric covers only the first
/// lyap_valid_count of them.
struct DiscreteTrajectory {
  std::vector<std::vector<double>> x;  // iterates x_0 .. x_n
  std::vector<std::vector<double>> d;  // divided differences (x_k - x_{k-1})/delta
  std::vector<double> f_gap;           // f(x_k) - f*
  std::vector<double> lyap_rel;        // V_k / V_0 (empty without a certificate)
  double lyap0 = 0.0;                  // V_0
  double gap_noise = 0.0;              // roundoff floor of the recorded gaps
  std::size_t lyap_valid_count = 0;    // entries above the floor
  double max_violation_rel = 0.0;      // max (V_{k+1} - V_k)/V_0 above the floor
  bool diverged = false;
  int last_finite = 0;
};

/// Runs x_{k+1} = x_k + beta (x_k - x_{k-1}) - alpha grad f(y_k),
/// y_k = x_k + gamma (x_k - x_{k-1}) for n_steps steps. With a certificate,
/// the Lyapunov sequence of the certified method is recorded.
DiscreteTrajectory run_method(const Objective& obj, const MethodParams& mp,
                              std::span<const double> x0, std::span<const double> x_minus1,
                              int n_steps, const DiscreteCertificate* cert = nullptr);

/// Sampled ODE run data; lyap_rel holds Vbar(t)/Vbar(0). Floor handling as in
/// DiscreteTrajectory.
struct OdeTrajectory {
  std::vector<double> t;
  std::vector<std::vector<double>> x;
  std::vector<std::vector<double>> v;  // scaled velocity xdot / sqrt(m)
  std::vector<double> f_gap;
  std::vector<double> bracket;         // f-gap + quadratic form (no exp weight)
  std::vector<double> lyap_rel;
  double lyap0 = 0.0;
  double gap_noise = 0.0;
  std::size_t lyap_valid_count = 0;
  double max_violation_rel = 0.0;
  bool diverged = false;
};

/// Integrates v' = -b_bar sqrt(m) v - grad f(x)/sqrt(m), x' = sqrt(m) v by
/// classical fixed-step RK4. h_int <= 0 selects min(0.005/sqrt(L), t_end/1e4).
OdeTrajectory run_ode(const Objective& obj, const OdeParams& ode,
                      std::span<const double> x0, std::span<const double> xdot0,
                      double t_end, double h_int = 0.0,
                      const ContinuousCertificate* cert = nullptr);

/// How beta is tied to the time step h in the continuum limit.
enum class StepConvention {
  kFixedFriction,  // beta_h = 1 - b_bar sqrt(m) h
  kPolyakMap,      // beta_h = (1 - sqrt(m) h) / (1 + sqrt(m) h)  (b_bar = 2)
};

struct LimitRow {
  double h;
  double r_h;
  double rate_err;  // |r_h - r_bar|
  double p_dev;     // max-entry deviation of P_hat_h from the ODE matrix
};

/// Convergence of the discrete certificate data to its ODE counterpart as
/// h decreases. fitted_exponent/prefactor come from a log-log least-squares
/// fit of rate_err against h; fitted_K = max rate_err / h.
struct LimitReport {
  double b_bar;
  double m;
  double r_bar;
  std::vector<LimitRow> rows;
  double fitted_exponent = 0.0;
  double fitted_prefactor = 0.0;
  double fitted_K = 0.0;
};

LimitReport limit_study(double b_bar, double m, std::span<const double> h_list,
                        StepConvention convention = StepConvention::kFixedFriction);

}  // namespace lyapcert
