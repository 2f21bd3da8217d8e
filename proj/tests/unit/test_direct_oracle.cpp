#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rnf/direct_oracle.hpp"
#include "rnf/grid.hpp"

namespace rnf {
namespace {

TEST(DirectRhs, ConstantIsZero) {
  const Grid u(5, 4, 9.0);
  const Grid v = direct_rhs(u, u, 0.3, KernelSpec::gaussian(2.0));
  for (double x : v.values()) EXPECT_EQ(x, 0.0);
}

TEST(DirectRhs, TwoPixels) {
  const Grid u = grid_from_rows({{1, 0}});
  const Grid v = direct_rhs(u, u, 0.0, KernelSpec::gaussian(1.0));
  EXPECT_NEAR(v[0], -std::exp(-1.0), 1e-15);
  EXPECT_NEAR(v[1], std::exp(-1.0), 1e-15);
}

TEST(DirectRhs, EqualValuesEqualVelocities) {
  std::mt19937_64 rng(3);
  const Grid u(8, 8, testing::random_field(rng, 64, 0, 5));
  const Grid v = direct_rhs(u, u, 0.0, KernelSpec::gaussian(3.0));
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < u.size(); ++j)
      if (u[i] == u[j]) EXPECT_EQ(v[i], v[j]);
}

TEST(DirectRhs, ShapeMismatch) {
  EXPECT_THROW(direct_rhs(Grid(2, 2), Grid(4, 1), 0.0, KernelSpec::gaussian(1.0)),
               std::invalid_argument);
}

TEST(DirectEuler, ZeroStepsAndZeroKernel) {
  const Grid u0 = grid_from_rows({{3, 1}, {2, 7}});
  const auto zero = direct_run_euler(u0, 0.0, KernelSpec::gaussian(1.0), 0.1, 0);
  ASSERT_EQ(zero.size(), 1u);
  EXPECT_EQ(zero[0], u0);
  const auto still = direct_run_euler(u0, 0.7, KernelSpec::zero(), 0.1, 10);
  ASSERT_EQ(still.size(), 11u);
  for (const Grid& g : still) EXPECT_EQ(g, u0);
  EXPECT_THROW(direct_run_euler(u0, 0.0, KernelSpec::gaussian(1.0), 0.0, 1),
               std::invalid_argument);
}

TEST(DirectEuler, MatchesHandIteration) {
  const Grid u0 = grid_from_rows({{1, 0}});
  const double tau = 0.1;
  double a = 1.0, b = 0.0;
  const auto traj = direct_run_euler(u0, 0.0, KernelSpec::gaussian(1.0), tau, 5);
  for (int n = 1; n <= 5; ++n) {
    const double w = std::exp(-(a - b) * (a - b));
    const double na = a + tau * w * (b - a);
    const double nb = b + tau * w * (a - b);
    a = na;
    b = nb;
    EXPECT_NEAR(traj[n][0], a, 1e-15);
    EXPECT_NEAR(traj[n][1], b, 1e-15);
  }
}

TEST(Equivalence, RandomImages) {
  std::mt19937_64 rng(17);
  for (double h : {5.0, 25.0, 100.0}) {
    const Grid u0(16, 16, testing::random_field(rng, 256, 0, 40));
    const EquivalenceReport r = compare_equivalence(u0, 0.0, KernelSpec::gaussian(h), 1e-3, 100);
    EXPECT_LE(r.max_abs_gap, 1e-10);
    EXPECT_EQ(r.level_set_violations, 0u);
    EXPECT_LE(r.level_count, 64u);
    EXPECT_EQ(r.steps, 100);
  }
}

TEST(Equivalence, WithFidelity) {
  std::mt19937_64 rng(18);
  const Grid u0(10, 12, testing::random_field(rng, 120, 0, 255));
  const EquivalenceReport r = compare_equivalence(u0, 0.5, KernelSpec::gaussian(30.0), 1e-4, 50);
  EXPECT_LE(r.max_abs_gap, 1e-10);
  EXPECT_EQ(r.level_set_violations, 0u);
}

TEST(Equivalence, ConstantImageIsExact) {
  const EquivalenceReport r =
      compare_equivalence(Grid(6, 6, 100.0), 0.0, KernelSpec::gaussian(5.0), 1e-3, 20);
  EXPECT_EQ(r.max_abs_gap, 0.0);
  EXPECT_EQ(r.level_set_violations, 0u);
  EXPECT_EQ(r.level_count, 1u);
}

TEST(Equivalence, RejectsOversizedGrid) {
  EXPECT_THROW(
      compare_equivalence(Grid(kDirectOracleMaxSide + 1, 2, 1.0), 0.0, KernelSpec::gaussian(1.0),
                          1e-3, 1),
      std::invalid_argument);
}

TEST(Equivalence, ContractivityAlongTrajectories) {
  std::mt19937_64 rng(19);
  const Grid a(8, 8, testing::random_field(rng, 64, 0, 100));
  const Grid b(8, 8, testing::random_field(rng, 64, 0, 100));
  const KernelSpec k = KernelSpec::gaussian(20.0);
  const auto ta = direct_run_euler(a, 0.0, k, 1e-3, 30);
  const auto tb = direct_run_euler(b, 0.0, k, 1e-3, 30);
  for (std::size_t n = 0; n < ta.size(); ++n) {
    const std::vector<double> va(ta[n].values().begin(), ta[n].values().end());
    const std::vector<double> vb(tb[n].values().begin(), tb[n].values().end());
    double direct = 0.0;
    for (std::size_t i = 0; i < va.size(); ++i) direct += (va[i] - vb[i]) * (va[i] - vb[i]);
    EXPECT_LE(testing::sorted_distance(va, vb, 2.0), std::sqrt(direct) + 1e-12);
  }
}

}  // namespace
}  // namespace rnf
