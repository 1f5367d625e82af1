#include "lyapcert/cert_continuous.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "root_scan.hpp"

namespace lyapcert {

double rate_curve_ode(double r_bar, double b_bar) {
  return r_bar * b_bar * b_bar - 2.0 * (r_bar * r_bar + 1.0) * b_bar +
         r_bar * r_bar * r_bar + 3.0 * r_bar;
}

double solve_rate_ode(double b_bar) {
  if (b_bar == 0.0) return 0.0;  // r (r^2 + 3) has the single root 0
  const double span = 2.0;       // roots satisfy |r| <= 1
  return detail::solve_unique_root(
      [&](double r) { return rate_curve_ode(r, b_bar); },
      [&](double r) {
        return b_bar * b_bar - 4.0 * r * b_bar + 3.0 * r * r + 3.0;
      },
      -span, span, "solve_rate_ode");
}

double ContinuousCertificate::bound_constant(double f_gap0, std::span<const double> x0,
                                             std::span<const double> xdot0,
                                             std::span<const double> x_star) const {
  const double sm = std::sqrt(m);
  double sq = 0.0;
  for (std::size_t i = 0; i < x0.size(); ++i) {
    const double w = xdot0[i] / sm + r_bar * (x0[i] - x_star[i]);
    sq += w * w;
  }
  return f_gap0 + (m / 2.0) * sq;
}

ContinuousCertificate certify_ode(double m, double b_bar) {
  if (!(m > 0.0)) {
    throw std::invalid_argument("certify_ode requires m > 0");
  }
  if (b_bar < 0.0) {
    throw std::invalid_argument("certify_ode requires b_bar >= 0");
  }
  const double r = solve_rate_ode(b_bar);
  const double sm = std::sqrt(m);

  ContinuousCertificate cert;
  cert.m = m;
  cert.b_bar = b_bar;
  cert.r_bar = r;
  cert.lambda = sm * r;
  cert.s_bar = 0.0;
  cert.sigma = 0.0;
  cert.p_bar_hat = Sym2{m / 2.0, (m / 2.0) * r, (m / 2.0) * r * r};
  // sigma = 0, so the smoothness constant never enters; any L >= m works here.
  cert.t_bar_hat = continuous_t_hat(OdeParams{b_bar, m}, cert.p_bar_hat, cert.lambda, 0.0,
                                    ProblemClass{m, m, 1.0});
  cert.valid =
      is_negative_semidefinite(cert.t_bar_hat) && is_positive_semidefinite(cert.p_bar_hat);
  return cert;
}

OdeOptimality optimality_check_ode(double b_bar) {
  if (!(b_bar > 0.0)) {
    throw std::invalid_argument("optimality_check_ode requires b_bar > 0");
  }
  const double r = solve_rate_ode(b_bar);

  OdeOptimality out;
  out.r_star = r;
  const Sym2 p{0.5, 0.5 * r, 0.5 * r * r};  // m normalized to 1
  const Sym3 t = continuous_t_hat(OdeParams{b_bar, 1.0}, p, r, 0.0, ProblemClass{1, 1, 1});
  out.det_minor = t.a11 * t.a22 - t.a12 * t.a12;
  out.multiplier_poly = -2.0 * r * r * r + 3.0 * b_bar * r * r -
                        (3.0 + b_bar * b_bar) * r + b_bar;
  const double lhs = out.multiplier_poly + rate_curve_ode(r, b_bar);
  const double rhs = (r * r - 1.0) * b_bar - r * r * r;
  out.identity_residual = lhs - rhs;
  return out;
}

namespace {

// The curve and its gradient are evaluated in shifted coordinates
// (u, s) = (r_bar - 1, s_bar); near the start point (1, 0) this avoids the
// cancellation in (g - 1) that the raw rational form suffers from.
struct CurveEval {
  double f;
  double df_du;
  double df_ds;
};

CurveEval eval_curve_shifted(double u, double s, double kappa) {
  const double kp1 = kappa + 1.0;
  const double r = 1.0 + u;
  const double w = u + s;       // r + s - 1
  const double rps = 1.0 + w;   // r + s

  const double d1 = 2.0 * kp1 * r + 4.0 * kappa * s;
  const double d2 = kp1 * r + 2.0 * kappa * s;
  const double scale = std::max({1.0, kp1 * std::fabs(r), kappa * std::fabs(s)});
  if (std::fabs(d1) < 1e-14 * scale || std::fabs(d2) < 1e-14 * scale) {
    throw std::invalid_argument("sigma_curve: denominator pole");
  }

  const double a_num = s * r * r * rps * rps;
  const double a = a_num / d1;
  const double da_du = (s * (2.0 * r * rps * rps + 2.0 * r * r * rps)) / d1 -
                       a * (2.0 * kp1) / d1;
  const double da_ds = (r * r * rps * rps + 2.0 * s * r * r * rps) / d1 -
                       a * (4.0 * kappa) / d1;

  // N = (k+1) r ((r+s)^2 - 1) - 2 k s, expanded so every term is nonnegative
  // for u, s >= 0.
  const double n = 2.0 * kp1 * u + kp1 * w * w + kp1 * u * w * (2.0 + w) + 2.0 * s;
  const double dn_du = 2.0 * kp1 + 2.0 * kp1 * w +
                       kp1 * (w * (2.0 + w) + u * (2.0 + w) + u * w);
  const double dn_ds = 2.0 * kp1 * w + kp1 * (u * (2.0 + w) + u * w) + 2.0;

  const double g1 = n / d2;
  const double dg1_du = dn_du / d2 - n * kp1 / (d2 * d2);
  const double dg1_ds = dn_ds / d2 - n * (2.0 * kappa) / (d2 * d2);

  CurveEval out;
  out.f = a - 0.25 * g1 * g1;
  out.df_du = da_du - 0.5 * g1 * dg1_du;
  out.df_ds = da_ds - 0.5 * g1 * dg1_ds;
  return out;
}

struct Vec2 {
  double u, s;
};

Vec2 unit_tangent(double u, double s, double kappa, const Vec2& prev) {
  const CurveEval e = eval_curve_shifted(u, s, kappa);
  double tu = -e.df_ds;
  double ts = e.df_du;
  const double norm = std::hypot(tu, ts);
  if (norm == 0.0) {
    throw std::runtime_error("continuation: vanishing gradient of the curve");
  }
  tu /= norm;
  ts /= norm;
  if (tu * prev.u + ts * prev.s < 0.0) {
    tu = -tu;
    ts = -ts;
  }
  return {tu, ts};
}

// Solves F = 0 along the normal line q + w n, |w| <= range. Walks outward
// from w = 0 looking for the nearest sign change, then bisects.
bool correct_transverse(const Vec2& q, const Vec2& n, double range, double kappa,
                        Vec2* out) {
  constexpr int kCells = 24;
  const double step = range / kCells;
  auto fval = [&](double w) {
    return eval_curve_shifted(q.u + w * n.u, q.s + w * n.s, kappa).f;
  };

  const double f0 = fval(0.0);
  double a = 0.0, fa = f0, b = 0.0;
  bool found = false;
  for (int i = 1; i <= kCells && !found; ++i) {
    for (const double sgn : {+1.0, -1.0}) {
      const double w = sgn * step * i;
      const double fw = fval(w);
      const double prev = sgn * step * (i - 1);
      const double fprev = (i == 1) ? f0 : fval(prev);
      if ((fprev < 0.0) != (fw < 0.0)) {
        a = prev;
        fa = fprev;
        b = w;
        found = true;
        break;
      }
    }
  }
  if (!found) return false;

  for (int it = 0; it < 90; ++it) {
    const double mid = 0.5 * (a + b);
    const double fm = fval(mid);
    if (fm == 0.0) {
      a = b = mid;
      break;
    }
    if ((fa < 0.0) == (fm < 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  const double w = 0.5 * (a + b);
  *out = {q.u + w * n.u, q.s + w * n.s};
  return true;
}

std::string point_string(double u, double s) {
  return "(r_bar = " + std::to_string(1.0 + u) + ", s_bar = " + std::to_string(s) + ")";
}

}  // namespace

double sigma_curve(double r_bar, double s_bar, double kappa) {
  return eval_curve_shifted(r_bar - 1.0, s_bar, kappa).f;
}

void sigma_curve_grad(double r_bar, double s_bar, double kappa, double* df_dr,
                      double* df_ds) {
  const CurveEval e = eval_curve_shifted(r_bar - 1.0, s_bar, kappa);
  if (df_dr) *df_dr = e.df_du;
  if (df_ds) *df_ds = e.df_ds;
}

SigmaConstruction sigma_construct(double r_bar, double s_bar, double kappa) {
  if (!(r_bar > 0.0)) {
    throw std::invalid_argument("sigma_construct requires r_bar > 0");
  }
  if (r_bar + s_bar == 0.0) {
    throw std::invalid_argument("sigma_construct: r_bar + s_bar = 0 (division by zero)");
  }
  SigmaConstruction c;
  c.p22_over_m = 0.5 + (s_bar / r_bar) * (kappa / (kappa + 1.0));
  c.p12_over_m = 0.5 * (r_bar + s_bar);
  c.p11_over_m = (c.p12_over_m * c.p12_over_m) / c.p22_over_m;
  c.b_bar = r_bar + c.p22_over_m / c.p12_over_m;
  return c;
}

SigmaCurvePoint max_rate_point(double kappa) {
  if (!(kappa > 1.0)) {
    throw std::invalid_argument("max_rate_point requires kappa > 1");
  }

  Vec2 p{0.0, 0.0};
  Vec2 t_prev{1.0, 0.0};
  double h = 1e-3;
  constexpr double kHMax = 1e-2;
  constexpr double kHMin = 1e-15;
  constexpr int kMaxSteps = 200000;

  for (int step = 0; step < kMaxSteps; ++step) {
    const Vec2 t = unit_tangent(p.u, p.s, kappa, t_prev);
    const Vec2 q{p.u + h * t.u, p.s + h * t.s};
    const Vec2 n{-t.s, t.u};

    Vec2 next;
    if (!correct_transverse(q, n, h, kappa, &next) || next.s < -1e-15) {
      h *= 0.5;
      if (h < kHMin) {
        throw std::runtime_error("max_rate_point: continuation stalled at " +
                                 point_string(p.u, p.s));
      }
      continue;
    }

    const Vec2 t_next = unit_tangent(next.u, next.s, kappa, t);
    if (t.u > 0.0 && t_next.u <= 0.0) {
      // The fold lies between p and next; maximize r over the corrected
      // points along this predictor segment by golden section.
      auto corrected_u = [&](double theta, Vec2* pt) {
        const Vec2 qq{p.u + theta * t.u, p.s + theta * t.s};
        if (!correct_transverse(qq, n, h, kappa, pt)) return false;
        return true;
      };

      const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
      double a = 0.0, b = h;
      double c = b - gr * (b - a), d = a + gr * (b - a);
      Vec2 pc = p, pd = p, best = next;
      double fc = -1e300, fd = -1e300, fbest = next.u;
      if (corrected_u(c, &pc)) fc = pc.u;
      if (corrected_u(d, &pd)) fd = pd.u;
      for (int it = 0; it < 300; ++it) {
        if (fc > fbest) {
          fbest = fc;
          best = pc;
        }
        if (fd > fbest) {
          fbest = fd;
          best = pd;
        }
        if (std::fabs(fc - fd) < 1e-13 && std::fabs(b - a) < 1e-7 * std::max(1.0, h)) {
          break;
        }
        if (fc < fd) {
          a = c;
          c = d;
          fc = fd;
          pc = pd;
          d = a + gr * (b - a);
          if (!corrected_u(d, &pd)) fd = -1e300;
          else fd = pd.u;
        } else {
          b = d;
          d = c;
          fd = fc;
          pd = pc;
          c = b - gr * (b - a);
          if (!corrected_u(c, &pc)) fc = -1e300;
          else fc = pc.u;
        }
      }

      const double r_bar = 1.0 + best.u;
      const double s_bar = best.s;
      const SigmaConstruction con = sigma_construct(r_bar, s_bar, kappa);

      // Validate the certificate matrices at the fold (m normalized to 1).
      const Sym2 p_hat{con.p11_over_m, con.p12_over_m, con.p22_over_m};
      const Sym3 t_hat = continuous_t_hat(OdeParams{con.b_bar, 1.0}, p_hat, r_bar, s_bar,
                                          ProblemClass{1.0, kappa, kappa});
      if (!is_negative_semidefinite(t_hat) || !is_positive_semidefinite(p_hat)) {
        throw std::runtime_error("max_rate_point: certificate validation failed at " +
                                 point_string(best.u, best.s));
      }

      return SigmaCurvePoint{kappa,          r_bar,          s_bar,         con.b_bar,
                             con.p11_over_m, con.p12_over_m, con.p22_over_m};
    }

    p = next;
    t_prev = t_next;
    h = std::min(h * 1.3, kHMax);
    if (p.u > 2.0 || p.s > 50.0) {
      throw std::runtime_error("max_rate_point: no fold found before " +
                               point_string(p.u, p.s));
    }
  }
  throw std::runtime_error("max_rate_point: step limit exceeded at " +
                           point_string(p.u, p.s));
}

}  // namespace lyapcert
