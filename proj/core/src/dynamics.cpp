#include "lyapcert/dynamics.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace lyapcert {

namespace {

double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double logistic(double x) {
  return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

bool all_finite(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace

Objective make_quadratic(double m, double L, int dim, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("make_quadratic requires dim >= 1");
  validate_problem(m, L);

  std::vector<double> diag(dim);
  if (dim == 1) {
    diag[0] = L;
  } else {
    diag.front() = m;
    diag.back() = L;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(std::log(m), std::log(L));
    for (int i = 1; i + 1 < dim; ++i) diag[i] = std::exp(unif(rng));
  }

  Objective obj;
  obj.dim = dim;
  obj.m = m;
  obj.L = L;
  obj.x_star.assign(dim, 0.0);
  obj.f_star = 0.0;
  obj.name = "quadratic";
  obj.value = [diag](std::span<const double> x) {
    double f = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) f += diag[i] * x[i] * x[i];
    return 0.5 * f;
  };
  obj.gradient = [diag](std::span<const double> x, std::span<double> g) {
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = diag[i] * x[i];
  };
  return obj;
}

Objective make_softplus_composite(double m, double L, int dim) {
  if (dim < 1) throw std::invalid_argument("make_softplus_composite requires dim >= 1");
  if (!(L > m)) throw std::invalid_argument("make_softplus_composite requires L > m");
  validate_problem(m, L);
  const double c = 4.0 * (L - m);

  // Per-coordinate stationarity: m x + c logistic(x) = 0. The root lies in
  // (-c/m, 0); Newton with a bisection safeguard.
  auto grad1 = [m, c](double x) { return m * x + c * logistic(x); };
  double lo = -c / m, hi = 0.0;
  double x = -c / (m + c / 4.0);
  for (int it = 0; it < 200; ++it) {
    const double g = grad1(x);
    if (g > 0.0) hi = x;
    else lo = x;
    const double sig = logistic(x);
    const double dg = m + c * sig * (1.0 - sig);
    double next = x - g / dg;
    if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - x) <= 1e-17 * std::max(1.0, std::fabs(x))) {
      x = next;
      break;
    }
    x = next;
  }
  if (std::fabs(grad1(x)) > 1e-14 * std::max(1.0, c)) {
    throw std::runtime_error("make_softplus_composite: stationarity solve failed");
  }
  const double root = x;

  Objective obj;
  obj.dim = dim;
  obj.m = m;
  obj.L = L;
  obj.x_star.assign(dim, root);
  obj.f_star = dim * (0.5 * m * root * root + c * softplus(root));
  obj.name = "softplus";
  obj.value = [m, c](std::span<const double> xs) {
    double f = 0.0;
    for (double xi : xs) f += 0.5 * m * xi * xi + c * softplus(xi);
    return f;
  };
  obj.gradient = [m, c](std::span<const double> xs, std::span<double> g) {
    for (std::size_t i = 0; i < xs.size(); ++i) g[i] = m * xs[i] + c * logistic(xs[i]);
  };
  return obj;
}

DiscreteTrajectory run_method(const Objective& obj, const MethodParams& mp,
                              std::span<const double> x0, std::span<const double> x_minus1,
                              int n_steps, const DiscreteCertificate* cert) {
  if (n_steps < 1) throw std::invalid_argument("run_method requires n_steps >= 1");
  const int dim = obj.dim;
  const double delta = std::sqrt(obj.m * mp.alpha);

  DiscreteTrajectory traj;
  traj.x.reserve(n_steps + 1);
  traj.d.reserve(n_steps + 1);
  traj.f_gap.reserve(n_steps + 1);

  std::vector<double> x(x0.begin(), x0.end());
  std::vector<double> d(dim);
  for (int i = 0; i < dim; ++i) d[i] = (x0[i] - x_minus1[i]) / delta;

  std::vector<double> y(dim), g(dim);

  const bool with_cert = cert != nullptr;
  const double log_rho_sq =
      with_cert && cert->rho_sq > 0.0 ? std::log(cert->rho_sq) : 0.0;
  double log_bracket0 = 0.0;
  bool above_floor = true;

  auto bracket_of = [&](const std::vector<double>& xi, const std::vector<double>& di,
                        double gap) {
    const Sym2& p = cert->p_hat;
    double quad = 0.0, cross = 0.0, pos = 0.0;
    for (int i = 0; i < dim; ++i) {
      const double dx = xi[i] - obj.x_star[i];
      quad += di[i] * di[i];
      cross += di[i] * dx;
      pos += dx * dx;
    }
    const double q = p.a11 * quad + 2.0 * p.a12 * cross + p.a22 * pos;
    return std::max(gap + q, 0.0);
  };

  auto record = [&](int k) {
    const double gap = obj.value(x) - obj.f_star;
    traj.x.push_back(x);
    traj.d.push_back(d);
    traj.f_gap.push_back(gap);
    if (with_cert) {
      const double br = bracket_of(x, d, gap);
      if (k == 0) {
        traj.gap_noise = 16.0 * std::numeric_limits<double>::epsilon() *
                         (2.0 * std::fabs(obj.f_star) + std::fabs(gap));
        traj.lyap0 = br;
        log_bracket0 = br > 0.0 ? std::log(br) : 0.0;
        traj.lyap_rel.push_back(br > 0.0 ? 1.0 : 0.0);
      } else if (traj.lyap0 == 0.0 || br == 0.0 || cert->rho_sq <= 0.0) {
        traj.lyap_rel.push_back(0.0);
      } else {
        traj.lyap_rel.push_back(
            std::exp(std::log(br) - log_bracket0 - k * log_rho_sq));
      }
      if (above_floor && br > traj.gap_noise) {
        traj.lyap_valid_count = traj.lyap_rel.size();
      } else {
        above_floor = false;
      }
    }
    return std::isfinite(gap) && all_finite(x);
  };

  if (!record(0)) {
    traj.diverged = true;
    return traj;
  }

  for (int k = 0; k < n_steps; ++k) {
    for (int i = 0; i < dim; ++i) y[i] = x[i] + delta * mp.gamma * d[i];
    obj.gradient(y, g);
    // d first, then x = x + delta d, so the divided-difference identity holds
    // to rounding.
    for (int i = 0; i < dim; ++i) {
      d[i] = mp.beta * d[i] - (mp.alpha / delta) * g[i];
      x[i] += delta * d[i];
    }
    if (!record(k + 1)) {
      traj.diverged = true;
      traj.last_finite = k;
      return traj;
    }
    traj.last_finite = k + 1;
  }

  if (with_cert) {
    for (std::size_t k = 0; k + 1 < traj.lyap_valid_count; ++k) {
      traj.max_violation_rel =
          std::max(traj.max_violation_rel, traj.lyap_rel[k + 1] - traj.lyap_rel[k]);
    }
  }
  return traj;
}

OdeTrajectory run_ode(const Objective& obj, const OdeParams& ode,
                      std::span<const double> x0, std::span<const double> xdot0,
                      double t_end, double h_int, const ContinuousCertificate* cert) {
  if (!(t_end > 0.0)) throw std::invalid_argument("run_ode requires t_end > 0");
  const int dim = obj.dim;
  const double sm = std::sqrt(ode.m);
  if (h_int <= 0.0) {
    h_int = std::min(0.005 / std::sqrt(obj.L), t_end / 1e4);
  }
  const long n_steps = std::lround(std::ceil(t_end / h_int));
  const double h = t_end / static_cast<double>(n_steps);
  const long stride = std::max(1L, n_steps / 100000L);

  std::vector<double> x(x0.begin(), x0.end());
  std::vector<double> v(dim);
  for (int i = 0; i < dim; ++i) v[i] = xdot0[i] / sm;

  OdeTrajectory traj;
  const bool with_cert = cert != nullptr;
  double log_bracket0 = 0.0;
  bool above_floor = true;

  auto bracket_of = [&](double gap) {
    const Sym2& p = cert->p_bar_hat;
    double quad = 0.0, cross = 0.0, pos = 0.0;
    for (int i = 0; i < dim; ++i) {
      const double dx = x[i] - obj.x_star[i];
      quad += v[i] * v[i];
      cross += v[i] * dx;
      pos += dx * dx;
    }
    return std::max(gap + p.a11 * quad + 2.0 * p.a12 * cross + p.a22 * pos, 0.0);
  };

  auto record = [&](double t, bool first) {
    const double gap = obj.value(x) - obj.f_star;
    traj.t.push_back(t);
    traj.x.push_back(x);
    traj.v.push_back(v);
    traj.f_gap.push_back(gap);
    if (with_cert) {
      const double br = bracket_of(gap);
      traj.bracket.push_back(br);
      if (first) {
        traj.gap_noise = 16.0 * std::numeric_limits<double>::epsilon() *
                         (2.0 * std::fabs(obj.f_star) + std::fabs(gap));
        traj.lyap0 = br;
        log_bracket0 = br > 0.0 ? std::log(br) : 0.0;
        traj.lyap_rel.push_back(br > 0.0 ? 1.0 : 0.0);
      } else if (traj.lyap0 == 0.0 || br == 0.0) {
        traj.lyap_rel.push_back(0.0);
      } else {
        traj.lyap_rel.push_back(std::exp(cert->lambda * t + std::log(br) - log_bracket0));
      }
      if (above_floor && br > traj.gap_noise) {
        traj.lyap_valid_count = traj.lyap_rel.size();
      } else {
        above_floor = false;
      }
    }
    return std::isfinite(gap) && all_finite(x);
  };

  // RK4 stages over the state (v, x).
  std::vector<double> g(dim), kv(dim), kx(dim), vv(dim), xx(dim), av(dim), ax(dim);
  auto rhs = [&](const std::vector<double>& vi, const std::vector<double>& xi,
                 std::vector<double>& dv, std::vector<double>& dx) {
    obj.gradient(xi, g);
    for (int i = 0; i < dim; ++i) {
      dv[i] = -ode.b_bar * sm * vi[i] - g[i] / sm;
      dx[i] = sm * vi[i];
    }
  };

  if (!record(0.0, true)) {
    traj.diverged = true;
    return traj;
  }

  std::vector<double> k1v(dim), k1x(dim), k2v(dim), k2x(dim), k3v(dim), k3x(dim),
      k4v(dim), k4x(dim);
  for (long k = 0; k < n_steps; ++k) {
    rhs(v, x, k1v, k1x);
    for (int i = 0; i < dim; ++i) {
      vv[i] = v[i] + 0.5 * h * k1v[i];
      xx[i] = x[i] + 0.5 * h * k1x[i];
    }
    rhs(vv, xx, k2v, k2x);
    for (int i = 0; i < dim; ++i) {
      vv[i] = v[i] + 0.5 * h * k2v[i];
      xx[i] = x[i] + 0.5 * h * k2x[i];
    }
    rhs(vv, xx, k3v, k3x);
    for (int i = 0; i < dim; ++i) {
      vv[i] = v[i] + h * k3v[i];
      xx[i] = x[i] + h * k3x[i];
    }
    rhs(vv, xx, k4v, k4x);
    for (int i = 0; i < dim; ++i) {
      v[i] += (h / 6.0) * (k1v[i] + 2.0 * (k2v[i] + k3v[i]) + k4v[i]);
      x[i] += (h / 6.0) * (k1x[i] + 2.0 * (k2x[i] + k3x[i]) + k4x[i]);
    }
    if ((k + 1) % stride == 0 || k + 1 == n_steps) {
      if (!record((k + 1) * h, false)) {
        traj.diverged = true;
        return traj;
      }
    }
  }

  if (with_cert) {
    for (std::size_t k = 0; k + 1 < traj.lyap_valid_count; ++k) {
      traj.max_violation_rel =
          std::max(traj.max_violation_rel, traj.lyap_rel[k + 1] - traj.lyap_rel[k]);
    }
  }
  return traj;
}

LimitReport limit_study(double b_bar, double m, std::span<const double> h_list,
                        StepConvention convention) {
  if (h_list.empty()) throw std::invalid_argument("limit_study requires at least one h");

  LimitReport report;
  report.b_bar = b_bar;
  report.m = m;
  report.r_bar = solve_rate_ode(b_bar);
  const double sm = std::sqrt(m);
  const Sym2 p_ode{m / 2.0, (m / 2.0) * report.r_bar,
                   (m / 2.0) * report.r_bar * report.r_bar};

  for (double h : h_list) {
    const double delta = sm * h;
    if (!(delta > 0.0) || delta >= 1.0) {
      throw std::invalid_argument("limit_study requires sqrt(m) h in (0, 1)");
    }
    const double b =
        convention == StepConvention::kFixedFriction ? b_bar : 2.0 / (1.0 + delta);
    const double r_h = solve_rate(b, delta);
    const Sym2 p_h = certificate_p_hat(r_h, delta, m);
    const double dev =
        std::max({std::fabs(p_h.a11 - p_ode.a11), std::fabs(p_h.a12 - p_ode.a12),
                  std::fabs(p_h.a22 - p_ode.a22)});
    report.rows.push_back(LimitRow{h, r_h, std::fabs(r_h - report.r_bar), dev});
  }

  // Log-log least squares for rate_err ~ prefactor * h^exponent.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n_fit = 0;
  for (const LimitRow& row : report.rows) {
    if (row.rate_err <= 0.0) continue;
    const double lx = std::log(row.h);
    const double ly = std::log(row.rate_err);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n_fit;
    report.fitted_K = std::max(report.fitted_K, row.rate_err / row.h);
  }
  if (n_fit >= 2) {
    const double denom = n_fit * sxx - sx * sx;
    report.fitted_exponent = (n_fit * sxy - sx * sy) / denom;
    report.fitted_prefactor =
        std::exp((sy - report.fitted_exponent * sx) / static_cast<double>(n_fit));
  }
  return report;
}

}  // namespace lyapcert
