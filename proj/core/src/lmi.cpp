#include "lyapcert/lmi.hpp"

#include <cmath>

namespace lyapcert {

StateSpaceHat state_space_hat(const NondimParams& nd, double gamma, double alpha) {
  const double delta = nd.delta;
  const double beta = nd.beta();
  StateSpaceHat ss;
  ss.A = {{{beta, 0.0}, {delta * beta, 1.0}}};
  ss.B = {-alpha / delta, -alpha};
  ss.C = {delta * gamma, 1.0};
  ss.E = {0.0, 1.0};
  return ss;
}

namespace {

// Rank-two quadratic update  T += w * v v^T + x * (v e3^T + e3 v^T) + y * e3 e3^T
// with v = (v0, v1, v2) and e3 = (0, 0, 1).
void add_outer(Sym3& t, const std::array<double, 3>& v, double w, double x, double y) {
  t.a11 += w * v[0] * v[0];
  t.a12 += w * v[0] * v[1];
  t.a13 += w * v[0] * v[2] + x * v[0];
  t.a22 += w * v[1] * v[1];
  t.a23 += w * v[1] * v[2] + x * v[1];
  t.a33 += w * v[2] * v[2] + 2.0 * x * v[2] + y;
}

}  // namespace

Sym3 discrete_t_hat(const StateSpaceHat& ss, const Sym2& p_hat, const LmiKnobs& knobs,
                    const ProblemClass& pc) {
  const auto& A = ss.A;
  const auto& B = ss.B;
  const auto& C = ss.C;
  const auto& E = ss.E;
  const double a0 = knobs.a0;
  const double rho_sq = knobs.rho_sq;

  // M0 block: [A'PA - rho^2 P, A'PB; B'PA, B'PB].
  const double pa[2][2] = {
      {p_hat.a11 * A[0][0] + p_hat.a12 * A[1][0], p_hat.a11 * A[0][1] + p_hat.a12 * A[1][1]},
      {p_hat.a12 * A[0][0] + p_hat.a22 * A[1][0], p_hat.a12 * A[0][1] + p_hat.a22 * A[1][1]}};
  const double pb[2] = {p_hat.a11 * B[0] + p_hat.a12 * B[1],
                        p_hat.a12 * B[0] + p_hat.a22 * B[1]};

  Sym3 t;
  t.a11 = A[0][0] * pa[0][0] + A[1][0] * pa[1][0] - rho_sq * p_hat.a11;
  t.a12 = A[0][0] * pa[0][1] + A[1][0] * pa[1][1] - rho_sq * p_hat.a12;
  t.a22 = A[0][1] * pa[0][1] + A[1][1] * pa[1][1] - rho_sq * p_hat.a22;
  t.a13 = A[0][0] * pb[0] + A[1][0] * pb[1];
  t.a23 = A[0][1] * pb[0] + A[1][1] * pb[1];
  t.a33 = B[0] * pb[0] + B[1] * pb[1];

  const std::array<double, 2> ea = {E[0] * A[0][0] + E[1] * A[1][0],
                                    E[0] * A[0][1] + E[1] * A[1][1]};
  const double eb = E[0] * B[0] + E[1] * B[1];

  // N1 enters both M1 and M2, so with weights a0 rho^2 and a0 (1 - rho^2) it
  // contributes with total weight a0.
  const std::array<double, 3> v1 = {ea[0] - C[0], ea[1] - C[1], eb};
  add_outer(t, v1, a0 * pc.L / 2.0, a0 * 0.5, 0.0);

  const std::array<double, 3> v2 = {C[0] - E[0], C[1] - E[1], 0.0};
  add_outer(t, v2, -a0 * rho_sq * pc.m / 2.0, a0 * rho_sq * 0.5, 0.0);

  const std::array<double, 3> v3 = {C[0], C[1], 0.0};
  const double w3 = a0 * (1.0 - rho_sq);
  add_outer(t, v3, -w3 * pc.m / 2.0, w3 * 0.5, 0.0);

  if (knobs.ell != 0.0) {
    const double mpl = pc.m + pc.L;
    add_outer(t, v3, -knobs.ell * pc.m * pc.L / mpl, knobs.ell * 0.5, -knobs.ell / mpl);
  }
  return t;
}

Sym3 discrete_t_hat_direct(const NondimParams& nd, double alpha, const Sym2& p_hat,
                           double rho_sq, const ProblemClass& pc) {
  const double d = nd.delta;
  const double beta = nd.beta();
  const double m = pc.m;
  const double p11 = p_hat.a11, p12 = p_hat.a12, p22 = p_hat.a22;

  Sym3 t;
  t.a11 = beta * beta * p11 + 2.0 * d * beta * beta * p12 + d * d * beta * beta * p22 -
          rho_sq * p11 - d * d * beta * beta * m / 2.0;
  t.a12 = beta * p12 + d * beta * p22 - rho_sq * p12 - d * beta * m / 2.0 +
          rho_sq * d * beta * m / 2.0;
  t.a13 = -(alpha / d) * beta * p11 - 2.0 * alpha * beta * p12 - d * alpha * beta * p22 +
          d * beta / 2.0;
  t.a22 = p22 - rho_sq * p22 - m / 2.0 + rho_sq * m / 2.0;
  t.a23 = -(alpha / d) * p12 - alpha * p22 + 0.5 - rho_sq / 2.0;
  t.a33 = (alpha / d) * (alpha / d) * p11 + 2.0 * (alpha / d) * alpha * p12 +
          alpha * alpha * p22 + alpha * alpha * pc.L / 2.0 - alpha;
  return t;
}

Sym3 continuous_t_hat(const OdeParams& ode, const Sym2& p_bar_hat, double lambda,
                      double sigma, const ProblemClass& pc) {
  const double sm = std::sqrt(ode.m);
  const double bb = ode.b_bar;
  const double p11 = p_bar_hat.a11, p12 = p_bar_hat.a12, p22 = p_bar_hat.a22;
  const double mpl = pc.m + pc.L;

  Sym3 t;
  t.a11 = -2.0 * bb * sm * p11 + 2.0 * sm * p12 + lambda * p11;
  t.a12 = -bb * sm * p12 + sm * p22 + lambda * p12;
  t.a13 = -p11 / sm + sm / 2.0;
  t.a22 = lambda * p22 - (ode.m / 2.0) * lambda - sigma * pc.m * pc.L / mpl;
  t.a23 = -p12 / sm + lambda / 2.0 + sigma / 2.0;
  t.a33 = -sigma / mpl;
  return t;
}

}  // namespace lyapcert
