#include "lyapcert/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lyapcert {

ProblemClass validate_problem(double m, double L) {
  if (!std::isfinite(m) || !std::isfinite(L)) {
    throw std::invalid_argument("problem class requires finite m and L");
  }
  if (m <= 0.0) {
    throw std::invalid_argument("strong-convexity modulus must satisfy m > 0 (got m = " +
                                std::to_string(m) + ")");
  }
  if (L < m) {
    throw std::invalid_argument("smoothness constant must satisfy L >= m (got L = " +
                                std::to_string(L) + ", m = " + std::to_string(m) + ")");
  }
  return ProblemClass{m, L, L / m};
}

NondimParams nondimensionalize(const ProblemClass& pc, const MethodParams& mp) {
  if (!(mp.alpha > 0.0)) {
    throw std::invalid_argument("step size must satisfy alpha > 0");
  }
  const double delta = std::sqrt(pc.m * mp.alpha);
  return NondimParams{delta, (1.0 - mp.beta) / delta, 0.0};
}

MethodParams method_params(const NondimParams& nd, double m) {
  const double alpha = nd.delta * nd.delta / m;
  const double beta = nd.beta();
  return MethodParams{alpha, beta, beta};
}

}  // namespace lyapcert
