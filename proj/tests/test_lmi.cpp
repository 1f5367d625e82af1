#include <doctest.h>

#include <cmath>
#include <random>

#include "lyapcert/cert_discrete.hpp"
#include "lyapcert/lmi.hpp"
#include "lyapcert/model.hpp"
#include "support/oracles.hpp"

using namespace lyapcert;

namespace {

bool entrywise_close(const Sym3& a, const Sym3& b, double tol) {
  auto ok = [tol](double x, double y) {
    return std::fabs(x - y) <= tol * std::max({1.0, std::fabs(x), std::fabs(y)});
  };
  return ok(a.a11, b.a11) && ok(a.a12, b.a12) && ok(a.a13, b.a13) && ok(a.a22, b.a22) &&
         ok(a.a23, b.a23) && ok(a.a33, b.a33);
}

}  // namespace

TEST_CASE("state-space factors") {
  const NondimParams nd{0.1, 20.0 / 11.0, 0.0};
  const double beta = nd.beta();

  SUBCASE("gamma = beta family") {
    const StateSpaceHat ss = state_space_hat(nd, beta, 0.01);
    CHECK(ss.A[0][0] == doctest::Approx(beta).epsilon(1e-15));
    CHECK(ss.A[0][1] == 0.0);
    CHECK(ss.A[1][0] == doctest::Approx(0.1 * beta).epsilon(1e-15));
    CHECK(ss.A[1][1] == 1.0);
    CHECK(ss.B[0] == doctest::Approx(-0.1).epsilon(1e-15));
    CHECK(ss.B[1] == doctest::Approx(-0.01).epsilon(1e-15));
    CHECK(ss.C[0] == doctest::Approx(0.1 * beta).epsilon(1e-15));
    CHECK(ss.C[1] == 1.0);
    CHECK(ss.E[0] == 0.0);
    CHECK(ss.E[1] == 1.0);
  }
  SUBCASE("gradient descent zeroes the momentum block") {
    const NondimParams gd{0.1, 10.0, 0.0};
    const StateSpaceHat ss = state_space_hat(gd, 0.0, 0.01);
    CHECK(ss.A[0][0] == 0.0);
    CHECK(ss.A[1][0] == 0.0);
    CHECK(ss.A[1][1] == 1.0);
  }
  SUBCASE("heavy ball keeps A, B but reads the gradient at x") {
    const StateSpaceHat hb = state_space_hat(nd, 0.0, 0.01);
    const StateSpaceHat nest = state_space_hat(nd, beta, 0.01);
    CHECK(hb.C[0] == 0.0);
    CHECK(hb.C[1] == 1.0);
    CHECK(hb.A == nest.A);
    CHECK(hb.B == nest.B);

    // Fixed-point identity: xi* = A xi* + B u* at u* = 0 means (A - I) xi* = 0
    // for xi* = (0, x*); column 2 of A must be (0, 1).
    CHECK(hb.A[0][1] == 0.0);
    CHECK(hb.A[1][1] == 1.0);
  }
}

TEST_CASE("closed-form entries at pinned points") {
  const ProblemClass pc = validate_problem(1.0, 100.0);

  SUBCASE("optimal parameters, r = 1") {
    const NondimParams nd{0.1, 20.0 / 11.0, 1.0};
    const Sym2 p = certificate_p_hat(1.0, 0.1, 1.0);
    const Sym3 t = discrete_t_hat_direct(nd, 0.01, p, 0.9, pc);
    // t11 = -(m/2) delta (1-delta)^3 / (1+delta)
    CHECK(t.a11 == doctest::Approx(-0.5 * 0.1 * 0.729 / 1.1).epsilon(1e-12));
    CHECK(std::fabs(t.a12) <= 1e-15);
    CHECK(std::fabs(t.a13) <= 1e-15);
    CHECK(std::fabs(t.a22) <= 1e-15);
    CHECK(std::fabs(t.a23) <= 1e-15);
    CHECK(std::fabs(t.a33) <= 1e-16);
  }
  SUBCASE("zero matrix, rho = beta = 1") {
    const ProblemClass unit = validate_problem(1.0, 1.0);
    const NondimParams nd{1.0, 0.0, 0.0};
    const Sym3 t = discrete_t_hat_direct(nd, 1.0, Sym2{}, 1.0, unit);
    CHECK(t.a11 == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(t.a12 == 0.0);
    CHECK(t.a13 == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(t.a22 == 0.0);
    CHECK(t.a23 == 0.0);
    CHECK(t.a33 == doctest::Approx(-0.5).epsilon(1e-15));
  }
  SUBCASE("t33 vanishes at alpha = 1/L, t23 vanishes by construction") {
    const double delta = 0.1;
    for (double r : {0.3, 0.8, 1.0}) {
      const NondimParams nd{delta, 2.0, r};
      const Sym2 p = certificate_p_hat(r, delta, 1.0);
      const Sym3 t = discrete_t_hat_direct(nd, 0.01, p, 1.0 - r * delta, pc);
      CHECK(std::fabs(t.a33) <= 1e-15);
      CHECK(std::fabs(t.a23) <= 1e-15);
      CHECK(std::fabs(t.a13) <= 1e-15);
    }
  }
  SUBCASE("t22 = 0 exactly at r = 1, negative for r < 1") {
    const NondimParams nd1{0.1, 2.0 / 1.1, 1.0};
    const Sym2 p1 = certificate_p_hat(1.0, 0.1, 1.0);
    CHECK(discrete_t_hat_direct(nd1, 0.01, p1, 0.9, pc).a22 == doctest::Approx(0.0));
    const Sym2 p2 = certificate_p_hat(0.7, 0.1, 1.0);
    const NondimParams nd2{0.1, 2.0, 0.7};
    CHECK(discrete_t_hat_direct(nd2, 0.01, p2, 0.93, pc).a22 < 0.0);
  }
}

TEST_CASE("generic assembly equals the closed forms on random draws") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 1000; ++trial) {
    const double m = std::exp(unif(rng) * std::log(10.0) * 2.0 - std::log(10.0));
    const double kappa = std::exp(unif(rng) * std::log(1e4));
    const ProblemClass pc = validate_problem(m, m * kappa);
    const double delta = 0.05 + 0.9 * unif(rng);
    const double beta = -0.99 + 1.98 * unif(rng);
    const double alpha = std::exp(unif(rng) * std::log(1e4) - std::log(1e4));
    const double rho_sq = unif(rng);
    const Sym2 p{m * gauss(rng), m * gauss(rng), m * gauss(rng)};

    const NondimParams nd{delta, (1.0 - beta) / delta, 0.0};
    const Sym3 direct = discrete_t_hat_direct(nd, alpha, p, rho_sq, pc);
    LmiKnobs knobs;
    knobs.rho_sq = rho_sq;
    const Sym3 generic = discrete_t_hat(state_space_hat(nd, beta, alpha), p, knobs, pc);
    CHECK(entrywise_close(direct, generic, 1e-12));
  }
}

TEST_CASE("dense d-dimensional recipe equals the hat factor expanded") {
  const ProblemClass pc = validate_problem(1.0, 100.0);
  const NondimParams nd{0.1, 2.0, 0.0};
  const double alpha = 0.01;
  std::mt19937_64 rng(17);
  std::normal_distribution<double> gauss;

  for (double gamma : {nd.beta(), 0.0, 0.37}) {
    const StateSpaceHat ss = state_space_hat(nd, gamma, alpha);
    const Sym2 p{gauss(rng), gauss(rng), gauss(rng)};
    LmiKnobs knobs;
    knobs.rho_sq = 0.93;
    knobs.ell = 0.1;  // exercise the fourth term too
    const Sym3 hat = discrete_t_hat(ss, p, knobs, pc);

    const int d = 2;
    const oracles::Mat dense = oracles::dense_certificate_matrix(ss, p, knobs, pc, d);
    const std::vector<double> expanded = kron_expand(hat, d);
    for (int i = 0; i < 3 * d; ++i) {
      for (int j = 0; j < 3 * d; ++j) {
        CHECK(std::fabs(dense(i, j) - expanded[static_cast<std::size_t>(i) * 3 * d + j]) <=
              1e-12 * std::max(1.0, std::fabs(dense(i, j))));
      }
    }
  }
}

TEST_CASE("continuous factor entries") {
  SUBCASE("polyak point") {
    const Sym2 p{0.5, 0.5, 0.5};
    const Sym3 t = continuous_t_hat(OdeParams{2.0, 1.0}, p, 1.0, 0.0,
                                    ProblemClass{1.0, 1.0, 1.0});
    CHECK(t.a11 == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(std::fabs(t.a12) <= 1e-15);
    CHECK(std::fabs(t.a13) <= 1e-15);
    CHECK(std::fabs(t.a22) <= 1e-15);
    CHECK(std::fabs(t.a23) <= 1e-15);
    CHECK(t.a33 == 0.0);
    CHECK(is_negative_semidefinite(t));
  }
  SUBCASE("sigma > 0 makes t33 strictly negative") {
    const ProblemClass pc = validate_problem(1.0, 10.0);
    const Sym3 t = continuous_t_hat(OdeParams{2.0, 1.0}, Sym2{0.5, 0.5, 0.5}, 1.0, 0.3, pc);
    CHECK(t.a33 == doctest::Approx(-0.3 / 11.0).epsilon(1e-15));
    CHECK(t.a33 < 0.0);
  }
  SUBCASE("frictionless energy certificate gives the zero matrix") {
    const Sym3 t = continuous_t_hat(OdeParams{0.0, 1.0}, Sym2{0.5, 0.0, 0.0}, 0.0, 0.0,
                                    ProblemClass{1.0, 1.0, 1.0});
    CHECK(t.max_abs() == 0.0);
  }
  SUBCASE("sqrt(m) scaling of the first entry") {
    // t11 = -2 b sqrt(m) p11 + 2 sqrt(m) p12 + lambda p11: all three terms
    // carry the same units; spot-check at m = 4.
    const Sym2 p{1.0, 0.5, 0.25};
    const Sym3 t = continuous_t_hat(OdeParams{3.0, 4.0}, p, 0.7, 0.0,
                                    ProblemClass{4.0, 4.0, 1.0});
    CHECK(t.a11 == doctest::Approx(-2.0 * 3.0 * 2.0 * 1.0 + 2.0 * 2.0 * 0.5 + 0.7 * 1.0)
                       .epsilon(1e-15));
  }
}

TEST_CASE("assembly is affine in ell") {
  const ProblemClass pc = validate_problem(1.0, 100.0);
  const DiscreteCertificate cert = certify(pc, optimal_params(pc));
  const StateSpaceHat ss = state_space_hat(cert.nd, cert.params.gamma, cert.params.alpha);
  LmiKnobs k0;
  k0.rho_sq = cert.rho_sq;
  LmiKnobs k1 = k0;
  k1.ell = 1.0;
  LmiKnobs kh = k0;
  kh.ell = 0.25;
  const Sym3 t0 = discrete_t_hat(ss, cert.p_hat, k0, pc);
  const Sym3 t1 = discrete_t_hat(ss, cert.p_hat, k1, pc);
  const Sym3 th = discrete_t_hat(ss, cert.p_hat, kh, pc);
  CHECK(th.a22 == doctest::Approx(t0.a22 + 0.25 * (t1.a22 - t0.a22)).epsilon(1e-14));
  CHECK(th.a23 == doctest::Approx(t0.a23 + 0.25 * (t1.a23 - t0.a23)).epsilon(1e-14));
  CHECK(th.a33 == doctest::Approx(t0.a33 + 0.25 * (t1.a33 - t0.a33)).epsilon(1e-14));
}
