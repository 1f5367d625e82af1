#include <doctest.h>

#include <cmath>
#include <random>

#include "lyapcert/cert_continuous.hpp"
#include "lyapcert/cert_discrete.hpp"
#include "lyapcert/heavy_ball.hpp"
#include "lyapcert/lmi.hpp"

using namespace lyapcert;

TEST_CASE("t11 entries") {
  const ProblemClass pc = validate_problem(1.0, 100.0);

  SUBCASE("only the smoothness term survives at P = 0, rho = beta") {
    const double v = t11_heavy_ball(Sym2{}, 0.25, 0.1, 0.5, pc);
    CHECK(v == doctest::Approx(0.01 * 99.0 * 0.25 / 2.0).epsilon(1e-14));
    CHECK(v > 0.0);
  }
  SUBCASE("obstruction term vanishes at kappa = 1") {
    const ProblemClass unit = validate_problem(2.0, 2.0);
    const double v = t11_heavy_ball(Sym2{}, 0.25, 0.1, 0.5, unit);
    CHECK(v == doctest::Approx(-0.25 * 0.0).epsilon(1e-15));
  }
  SUBCASE("three-parameter entry specializes both ways") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> gauss;
    for (int trial = 0; trial < 200; ++trial) {
      const Sym2 p{gauss(rng), gauss(rng), gauss(rng)};
      const double rho_sq = 0.8, delta = 0.07, beta = 0.6;
      CHECK(t11_three_param(p, rho_sq, delta, beta, 0.0, pc) ==
            doctest::Approx(t11_heavy_ball(p, rho_sq, delta, beta, pc)).epsilon(1e-13));
      // gamma = beta reproduces the closed-form (1,1) entry
      const NondimParams nd{delta, (1.0 - beta) / delta, 0.0};
      const Sym3 direct = discrete_t_hat_direct(nd, 0.002, p, rho_sq, pc);
      CHECK(t11_three_param(p, rho_sq, delta, beta, beta, pc) ==
            doctest::Approx(direct.a11).epsilon(1e-12));
    }
  }
  SUBCASE("unbounded growth in L at fixed gap from the momentum coefficient") {
    const Sym2 p{};
    double prev = 0.0;
    for (double L : {1e2, 1e4, 1e6}) {
      const ProblemClass big = validate_problem(1.0, L);
      const double v = t11_three_param(p, 0.36, 0.05, 0.6, 0.3, big);
      CHECK(v > prev);
      prev = v;
    }
    CHECK(prev > 1e2);
  }
}

TEST_CASE("printed entry vs generic assembly differ by the documented gap term") {
  // The generic certificate assembly produces (L/2) delta^2 (beta-gamma)^2 in
  // the (1,1) entry where the family formula carries (L-m)/2; the difference
  // is exactly (m/2) delta^2 (beta-gamma)^2. At gamma = beta both agree.
  const ProblemClass pc = validate_problem(1.0, 100.0);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const Sym2 p{gauss(rng), gauss(rng), gauss(rng)};
    const double delta = 0.02 + 0.5 * unif(rng);
    const double beta = -0.9 + 1.8 * unif(rng);
    const double gamma = -0.9 + 1.8 * unif(rng);
    const double rho_sq = unif(rng);
    const NondimParams nd{delta, (1.0 - beta) / delta, 0.0};
    LmiKnobs knobs;
    knobs.rho_sq = rho_sq;
    const Sym3 generic = discrete_t_hat(state_space_hat(nd, gamma, 0.001), p, knobs, pc);
    const double printed = t11_three_param(p, rho_sq, delta, beta, gamma, pc);
    const double gap = 0.5 * pc.m * delta * delta * (beta - gamma) * (beta - gamma);
    CHECK(generic.a11 ==
          doctest::Approx(printed + gap).epsilon(1e-12));
  }
}

TEST_CASE("limit obstruction") {
  const ContinuousCertificate cert = certify_ode(1.0, 2.0);

  SUBCASE("dominated by the smoothness term for large L") {
    const ProblemClass pc = validate_problem(1.0, 1e6);
    const double v = limit_obstruction(2.0, cert.lambda, cert.p_bar_hat, 1.0, pc);
    CHECK(v == doctest::Approx(499.9995).epsilon(1e-6));
    CHECK(v > 0.0);
  }
  SUBCASE("smoothness term absent at kappa = 1") {
    const ProblemClass unit = validate_problem(1.0, 1.0);
    const double v = limit_obstruction(2.0, cert.lambda, cert.p_bar_hat, 1.0, unit);
    // only the matrix terms remain: -2(b - lambda) p11 + 2 p12 = -1 + 1
    CHECK(std::fabs(v) <= 1e-13);
  }
  SUBCASE("growth like (c/2) sqrt(L)") {
    for (double L : {1e4, 1e6, 1e8}) {
      const ProblemClass pc = validate_problem(1.0, L);
      const double v = limit_obstruction(2.0, cert.lambda, cert.p_bar_hat, 1.0, pc);
      CHECK(std::fabs(v / (0.5 * std::sqrt(L)) - 1.0) <= 0.05);
    }
  }
  SUBCASE("agrees with the discrete entry scaled by 1/delta as h -> 0") {
    // delta^{-1} t11 at beta = 1 - b delta, P = P_h tends to the reported
    // value minus r p11 (the reported expression weights the lambda p11 term
    // twice; the assembled entry carries it once). The offset is O(1) and
    // both expressions grow with sqrt(L), so either witnesses the
    // contradiction.
    const ProblemClass pc = validate_problem(1.0, 1e4);
    const double limit = limit_obstruction(2.0, cert.lambda, cert.p_bar_hat, 1.0, pc);
    const double offset = cert.r_bar * cert.p_bar_hat.a11;
    double prev_err = 1e300;
    for (double delta : {1e-2, 1e-3, 1e-4}) {
      const double beta = 1.0 - 2.0 * delta;
      const double r_h = solve_rate(2.0, delta);
      const Sym2 p_h = certificate_p_hat(r_h, delta, pc.m);
      // the scan regime fixes delta = c sqrt(m/L) inside t11's L-term; undo
      // the mismatch by evaluating at matching c = delta sqrt(L/m)
      const double c_eff = delta * std::sqrt(pc.L / pc.m);
      const double t11 = t11_heavy_ball(p_h, 1.0 - r_h * delta, delta, beta, pc);
      const double ref =
          limit_obstruction(2.0, cert.lambda, cert.p_bar_hat, c_eff, pc) - offset;
      const double err = std::fabs(t11 / delta - ref);
      CHECK(err < prev_err);
      prev_err = err;
    }
    CHECK(prev_err <= 0.05 * std::fabs(limit));
  }
}

TEST_CASE("feasibility scans") {
  SUBCASE("no certificate found at accelerated step sizes") {
    const ScanReport rep = scan_feasibility(1e4, 1.0, 20000, 42);
    CHECK_FALSE(rep.feasible);
    CHECK(rep.min_lambda_max > 0.0);
    CHECK(rep.obstruction_value > 0.0);
  }
  SUBCASE("control with gamma = beta finds the analytic witness") {
    const ScanReport rep = scan_feasibility(1e4, 1.0, 20000, 42, true);
    CHECK(rep.feasible);
    CHECK(rep.min_lambda_max <= 1e-9);
  }
  SUBCASE("kappa = 1 at a stable step scale admits certificates") {
    // at c = 1 the delta = 0.9 iteration is linearly unstable, so the scan is
    // run at c = 0.5 where the obstruction-free feasible set is nonempty
    const ScanReport rep = scan_feasibility(1.0, 0.5, 20000, 42);
    CHECK(rep.feasible);
  }
  SUBCASE("obstruction floor grows with the condition number at matched seeds") {
    double prev = -1e300;
    for (double kappa : {1e2, 1e3, 1e4}) {
      const ScanReport rep = scan_feasibility(kappa, 1.0, 20000, 42);
      CHECK(rep.min_lambda_max >= prev);
      prev = rep.min_lambda_max;
    }
  }
}
