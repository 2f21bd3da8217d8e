#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "rnf/asymptotics.hpp"
#include "rnf/direct_oracle.hpp"
#include "rnf/dynamics.hpp"

namespace {

using namespace rnf;

struct Profile {
  std::vector<double> c;
  std::vector<double> mu;
};

Profile make_profile(std::size_t q) {
  std::mt19937_64 rng(q);
  std::uniform_int_distribution<int> meas(1, 2000);
  Profile p{std::vector<double>(q), std::vector<double>(q)};
  for (std::size_t j = 0; j < q; ++j) {
    p.c[j] = 255.0 * (1.0 - static_cast<double>(j) / static_cast<double>(q));
    p.mu[j] = meas(rng);
  }
  return p;
}

void BM_StepSemiImplicit(benchmark::State& state) {
  const Profile p = make_profile(static_cast<std::size_t>(state.range(0)));
  const KernelSpec k = KernelSpec::gaussian(25.0);
  const double tau = auto_tau0(p.c, p.mu, k, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(step_semi_implicit(p.c, p.mu, p.c, 0.0, tau, 1e-5, 100, k));
  }
}
BENCHMARK(BM_StepSemiImplicit)->RangeMultiplier(2)->Range(16, 256);

void BM_RunLevels(benchmark::State& state) {
  const Profile p = make_profile(static_cast<std::size_t>(state.range(0)));
  SolverConfig cfg;
  cfg.energy_tol = 0.0;
  cfg.max_steps = 100;
  cfg.record_every = 100;
  const KernelSpec k = KernelSpec::gaussian(25.0);
  for (auto _ : state) benchmark::DoNotOptimize(run_levels(p.c, p.mu, cfg, k));
}
BENCHMARK(BM_RunLevels)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_DirectRhs(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> d(0, 255);
  Grid u(side, side);
  for (double& v : u.values()) v = d(rng);
  const KernelSpec k = KernelSpec::gaussian(25.0);
  for (auto _ : state) benchmark::DoNotOptimize(direct_rhs(u, u, 0.0, k));
}
BENCHMARK(BM_DirectRhs)->Arg(16)->Arg(32);

void BM_IntegralI(benchmark::State& state) {
  const SmoothProfile p = SmoothProfile::polynomial(1.0, {1.0, -1.0, 0.0, -0.3});
  const KernelSpec k = KernelSpec::gaussian(0.025);
  for (auto _ : state) benchmark::DoNotOptimize(integral_I(p, 0.5, k));
}
BENCHMARK(BM_IntegralI);

}  // namespace

BENCHMARK_MAIN();
