#include "lyapcert/sym.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lyapcert {

double Sym2::max_abs() const {
  return std::max({std::fabs(a11), std::fabs(a12), std::fabs(a22)});
}

double Sym3::max_abs() const {
  return std::max({std::fabs(a11), std::fabs(a12), std::fabs(a13), std::fabs(a22),
                   std::fabs(a23), std::fabs(a33)});
}

std::array<double, 2> eigenvalues(const Sym2& s) {
  const double mean = 0.5 * (s.a11 + s.a22);
  const double half_gap = 0.5 * (s.a11 - s.a22);
  const double rad = std::hypot(half_gap, s.a12);
  return {mean - rad, mean + rad};
}

namespace {

std::array<double, 3> jacobi3(const Sym3& s) {
  std::vector<double> a = {s.a11, s.a12, s.a13, s.a12, s.a22, s.a23, s.a13, s.a23, s.a33};
  const std::vector<double> ev = jacobi_eigenvalues(std::move(a), 3);
  return {ev[0], ev[1], ev[2]};
}

}  // namespace

std::array<double, 3> eigenvalues(const Sym3& s) {
  const double off = s.a12 * s.a12 + s.a13 * s.a13 + s.a23 * s.a23;
  if (off == 0.0) {
    std::array<double, 3> ev = {s.a11, s.a22, s.a33};
    std::sort(ev.begin(), ev.end());
    return ev;
  }

  const double q = s.trace() / 3.0;
  const double p2 = (s.a11 - q) * (s.a11 - q) + (s.a22 - q) * (s.a22 - q) +
                    (s.a33 - q) * (s.a33 - q) + 2.0 * off;
  const double p = std::sqrt(p2 / 6.0);

  // B = (A - q I) / p, det(B)/2 drives the trigonometric solve.
  const double b11 = (s.a11 - q) / p, b22 = (s.a22 - q) / p, b33 = (s.a33 - q) / p;
  const double b12 = s.a12 / p, b13 = s.a13 / p, b23 = s.a23 / p;
  const double detb = b11 * (b22 * b33 - b23 * b23) - b12 * (b12 * b33 - b23 * b13) +
                      b13 * (b12 * b23 - b22 * b13);
  const double half_det = 0.5 * detb;

  // Near |half_det| = 1 the cubic has a (nearly) repeated root and the acos
  // branch loses accuracy; switch to Jacobi sweeps there.
  if (std::fabs(half_det) > 1.0 - 1e-9) {
    return jacobi3(s);
  }

  const double phi = std::acos(half_det) / 3.0;
  const double two_pi_3 = 2.0 * std::numbers::pi / 3.0;
  const double e_hi = q + 2.0 * p * std::cos(phi);
  const double e_lo = q + 2.0 * p * std::cos(phi + two_pi_3);
  const double e_mid = 3.0 * q - e_hi - e_lo;
  return {e_lo, e_mid, e_hi};
}

std::vector<double> jacobi_eigenvalues(std::vector<double> a, int n, int max_sweeps) {
  auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };

  double frob = 0.0;
  for (double v : a) frob += v * v;
  frob = std::sqrt(frob);
  const double stop = 1e-15 * std::max(1.0, frob);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += at(p, q) * at(p, q);
    if (std::sqrt(2.0 * off) < stop) break;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (int k = 0; k < n; ++k) {
          const double akp = at(k, p);
          const double akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = at(p, k);
          const double aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
      }
    }
  }

  std::vector<double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = at(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

namespace {

template <class S, class Eigs>
bool psd_impl(const S& s, const Eigs& ev, double tol) {
  const double scale = std::max(1.0, s.max_abs());
  return ev.front() >= -tol * scale;
}

template <class S, class Eigs>
bool nsd_impl(const S& s, const Eigs& ev, double tol) {
  const double scale = std::max(1.0, s.max_abs());
  return ev.back() <= tol * scale;
}

}  // namespace

bool is_positive_semidefinite(const Sym2& s, double tol) {
  return psd_impl(s, eigenvalues(s), tol);
}
bool is_positive_semidefinite(const Sym3& s, double tol) {
  return psd_impl(s, eigenvalues(s), tol);
}
bool is_negative_semidefinite(const Sym2& s, double tol) {
  return nsd_impl(s, eigenvalues(s), tol);
}
bool is_negative_semidefinite(const Sym3& s, double tol) {
  return nsd_impl(s, eigenvalues(s), tol);
}

std::vector<double> kron_expand(const Sym3& hat, int d) {
  const int n = 3 * d;
  std::vector<double> full(static_cast<std::size_t>(n) * n, 0.0);
  const double h[3][3] = {{hat.a11, hat.a12, hat.a13},
                          {hat.a12, hat.a22, hat.a23},
                          {hat.a13, hat.a23, hat.a33}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < d; ++k)
        full[static_cast<std::size_t>(i * d + k) * n + (j * d + k)] = h[i][j];
  return full;
}

bool kron_expand_check(const Sym3& hat, int d, double tol) {
  const std::array<double, 3> base = eigenvalues(hat);
  std::vector<double> expected;
  expected.reserve(3 * d);
  for (double e : base)
    for (int k = 0; k < d; ++k) expected.push_back(e);
  std::sort(expected.begin(), expected.end());

  const std::vector<double> got = jacobi_eigenvalues(kron_expand(hat, d), 3 * d);

  double max_ev = 0.0;
  for (double e : expected) max_ev = std::max(max_ev, std::fabs(e));
  const double scale = std::max(1.0, max_ev);
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (std::fabs(expected[i] - got[i]) > tol * scale) return false;
  }
  return true;
}

}  // namespace lyapcert
