#include <benchmark/benchmark.h>

#include <random>

#include "lyapcert/cert_continuous.hpp"
#include "lyapcert/cert_discrete.hpp"
#include "lyapcert/dynamics.hpp"
#include "lyapcert/lmi.hpp"
#include "lyapcert/sym.hpp"

using namespace lyapcert;

static void BM_Certify(benchmark::State& state) {
  const ProblemClass pc = validate_problem(1.0, 100.0);
  const MethodParams mp = optimal_params(pc);
  for (auto _ : state) {
    auto cert = certify(pc, mp);
    benchmark::DoNotOptimize(cert);
  }
}
BENCHMARK(BM_Certify);

static void BM_SolveRate(benchmark::State& state) {
  for (auto _ : state) {
    double r = solve_rate(2.0, 0.1);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_SolveRate);

static void BM_Sym3Eigenvalues(benchmark::State& state) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss;
  Sym3 s{gauss(rng), gauss(rng), gauss(rng), gauss(rng), gauss(rng), gauss(rng)};
  for (auto _ : state) {
    auto ev = eigenvalues(s);
    benchmark::DoNotOptimize(ev);
  }
}
BENCHMARK(BM_Sym3Eigenvalues);

static void BM_DiscreteAssembly(benchmark::State& state) {
  const ProblemClass pc = validate_problem(1.0, 100.0);
  const NondimParams nd{0.1, 2.0, 0.0};
  const StateSpaceHat ss = state_space_hat(nd, nd.beta(), 0.01);
  const Sym2 p = certificate_p_hat(0.9756, 0.1, 1.0);
  LmiKnobs knobs;
  knobs.rho_sq = 1.0 - 0.9756 * 0.1;
  for (auto _ : state) {
    Sym3 t = discrete_t_hat(ss, p, knobs, pc);
    benchmark::DoNotOptimize(t);
  }
}
BENCHMARK(BM_DiscreteAssembly);

static void BM_MaxRatePoint(benchmark::State& state) {
  const double kappa = std::pow(10.0, static_cast<double>(state.range(0)));
  for (auto _ : state) {
    auto pt = max_rate_point(kappa);
    benchmark::DoNotOptimize(pt);
  }
}
BENCHMARK(BM_MaxRatePoint)->Arg(2)->Arg(6)->Unit(benchmark::kMillisecond);

static void BM_NesterovRun(benchmark::State& state) {
  const ProblemClass pc = validate_problem(1.0, 100.0);
  const MethodParams mp = optimal_params(pc);
  const DiscreteCertificate cert = certify(pc, mp);
  const Objective obj = make_quadratic(1.0, 100.0, 10, 42);
  std::vector<double> x0(10, 1.0);
  for (auto _ : state) {
    auto traj = run_method(obj, mp, x0, x0, 500, &cert);
    benchmark::DoNotOptimize(traj);
  }
}
BENCHMARK(BM_NesterovRun)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
