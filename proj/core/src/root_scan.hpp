#pragma once

#include <stdexcept>
#include <string>

namespace lyapcert::detail {

// Bracketing scan plus bisection plus a few guarded Newton polish steps for a
// function with a single sign change on [lo, hi].
template <class F, class DF>
double solve_unique_root(F f, DF df, double lo, double hi, const char* what) {
  constexpr int kScan = 64;
  constexpr int kMaxBisect = 200;

  double a = lo, fa = f(lo);
  if (fa == 0.0) return lo;
  double b = 0.0, fb = 0.0;
  bool bracketed = false;
  for (int i = 1; i <= kScan; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / kScan;
    const double fx = f(x);
    if (fx == 0.0) return x;
    if ((fa < 0.0) != (fx < 0.0)) {
      b = x;
      fb = fx;
      bracketed = true;
      break;
    }
    a = x;
    fa = fx;
  }
  if (!bracketed) {
    throw std::runtime_error(std::string(what) + ": failed to bracket the root");
  }
  (void)fb;

  int it = 0;
  while (b - a > 1e-13 && it++ < kMaxBisect) {
    const double mid = 0.5 * (a + b);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fa < 0.0) == (fm < 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  if (it > kMaxBisect) {
    throw std::runtime_error(std::string(what) + ": bisection did not converge");
  }

  double r = 0.5 * (a + b);
  for (int k = 0; k < 3; ++k) {
    const double d = df(r);
    if (d == 0.0) break;
    const double next = r - f(r) / d;
    if (next < a || next > b) break;
    r = next;
  }
  return r;
}

}  // namespace lyapcert::detail
