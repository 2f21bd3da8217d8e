#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "rnf/kernels.hpp"

namespace rnf {
namespace {

TEST(Gaussian, Values) {
  const KernelSpec k1 = KernelSpec::gaussian(1.0);
  EXPECT_DOUBLE_EQ(k1.eval(0.0), 1.0);
  EXPECT_NEAR(k1.eval(1.0), 0.367879441171442, 1e-15);
  EXPECT_DOUBLE_EQ(KernelSpec::gaussian(2.0).eval(2.0), std::exp(-1.0));
}

TEST(Gaussian, Derivative) {
  for (double h : {0.5, 1.0, 7.0}) EXPECT_EQ(KernelSpec::gaussian(h).eval_derivative(0.0), 0.0);
  const KernelSpec k = KernelSpec::gaussian(1.0);
  EXPECT_NEAR(k.eval_derivative(1.0), -2.0 * std::exp(-1.0), 1e-15);
  const KernelSpec k3 = KernelSpec::gaussian(3.0);
  for (double xi : {0.3, 1.0, 4.5, 10.0}) {
    EXPECT_DOUBLE_EQ(k3.eval_derivative(-xi), -k3.eval_derivative(xi));
    // Closed form -2 xi / h^2 exp(-xi^2 / h^2).
    EXPECT_NEAR(k3.eval_derivative(xi), -2.0 * xi / 9.0 * std::exp(-xi * xi / 9.0), 1e-15);
  }
}

TEST(Gaussian, Phi) {
  const KernelSpec k = KernelSpec::gaussian(1.0);
  EXPECT_EQ(k.phi(0.0), 0.0);
  EXPECT_NEAR(k.phi(1.0), std::exp(-1.0), 1e-15);
  for (double s : {0.1, 0.9, 2.5}) EXPECT_DOUBLE_EQ(k.phi(-s), -k.phi(s));
}

TEST(Gaussian, RescalingAndParity) {
  for (double h : {0.1, 1.0, 25.0, 300.0}) {
    const KernelSpec k = KernelSpec::gaussian(h);
    const KernelSpec unit = KernelSpec::gaussian(1.0);
    for (double xi = -5.0 * h; xi <= 5.0 * h; xi += h / 7.0) {
      EXPECT_NEAR(k.eval(xi), unit.eval(xi / h), 1e-15);
      EXPECT_EQ(k.eval(xi), k.eval(-xi));
      EXPECT_GE(k.eval(xi), 0.0);
    }
  }
  EXPECT_TRUE(KernelSpec::gaussian(2.0).is_even());
}

TEST(Gaussian, LipschitzBound) {
  const double expected = 1.0 + 2.0 * std::exp(-1.5);
  for (double h : {0.2, 1.0, 25.0}) {
    const KernelSpec k = KernelSpec::gaussian(h);
    EXPECT_DOUBLE_EQ(k.lipschitz_bound(), expected);
    const double observed =
        testing::dense_lipschitz([&](double s) { return k.phi(s); }, 6.0 * h, 200000);
    EXPECT_LE(observed, k.lipschitz_bound());
    EXPECT_NEAR(observed, 1.0, 1e-6);
  }
}

TEST(Histogram, ShapeAndDerivative) {
  const double eps = 0.01;
  const KernelSpec k = KernelSpec::histogram(2.0, eps);
  EXPECT_FALSE(k.is_even());
  EXPECT_EQ(k.eval(0.0), 0.0);
  EXPECT_EQ(k.eval(3.0), 0.0);
  // xi = -2 gives s = -1: 1 / (1 + eps^2).
  EXPECT_NEAR(k.eval(-2.0), 1.0 / (1.0 + eps * eps), 1e-15);
  for (double xi : {-0.001, -0.05, -1.0, -9.0}) {
    const double d = 1e-7;
    EXPECT_NEAR(k.eval_derivative(xi), (k.eval(xi + d) - k.eval(xi - d)) / (2 * d),
                1e-5 * (1.0 + std::abs(k.eval_derivative(xi))));
  }
  for (double xi = -50.0; xi <= 50.0; xi += 0.01) EXPECT_GE(k.eval(xi), 0.0);
}

TEST(Histogram, LipschitzBoundHolds) {
  for (double h : {0.5, 1.0, 10.0}) {
    const KernelSpec k = KernelSpec::histogram(h, 0.05);
    const double observed =
        testing::dense_lipschitz([&](double s) { return k.phi(s); }, 3.0 * h, 400000);
    EXPECT_LE(observed, k.lipschitz_bound() * (1.0 + 1e-9));
    EXPECT_NEAR(observed, k.lipschitz_bound(), 1e-3 * k.lipschitz_bound());
    EXPECT_DOUBLE_EQ(k.lipschitz_bound(), KernelSpec::histogram(1.0, 0.05).lipschitz_bound());
  }
}

TEST(Table, LinearInterpolationWithClampedTails) {
  const KernelSpec k = KernelSpec::table(2.0, {-1.0, 0.0, 1.0}, {0.0, 1.0, 0.5});
  EXPECT_FALSE(k.is_even());
  EXPECT_DOUBLE_EQ(k.eval(0.0), 1.0);
  EXPECT_DOUBLE_EQ(k.eval(1.0), 0.75);  // s = 0.5
  EXPECT_DOUBLE_EQ(k.eval(-1.0), 0.5);  // s = -0.5
  EXPECT_DOUBLE_EQ(k.eval(100.0), 0.5);
  EXPECT_DOUBLE_EQ(k.eval(-100.0), 0.0);
  EXPECT_THROW(k.eval_derivative(0.5), std::logic_error);
}

TEST(Table, DerivativeDataAndEvenness) {
  const KernelSpec k =
      KernelSpec::table(1.0, {-1.0, 0.0, 1.0}, {0.5, 1.0, 0.5}, std::vector<double>{0.5, 0.0, -0.5});
  EXPECT_TRUE(k.is_even());
  EXPECT_DOUBLE_EQ(k.eval_derivative(-1.0), 0.5);
  EXPECT_DOUBLE_EQ(k.eval_derivative(0.5), -0.25);
  const double observed = testing::dense_lipschitz([&](double s) { return k.phi(s); }, 4.0, 80000);
  EXPECT_LE(observed, k.lipschitz_bound() + 1e-9);
}

TEST(Table, Errors) {
  EXPECT_THROW(KernelSpec::table(1.0, {0.0}, {1.0}), std::invalid_argument);
  EXPECT_THROW(KernelSpec::table(1.0, {0.0, 0.0}, {1.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(KernelSpec::table(1.0, {0.0, 1.0}, {1.0}), std::invalid_argument);
  EXPECT_THROW(KernelSpec::table(1.0, {0.0, 1.0}, {1.0, -0.1}), std::invalid_argument);
}

TEST(Zero, VanishesEverywhere) {
  const KernelSpec k = KernelSpec::zero();
  for (double xi : {-3.0, 0.0, 2.0}) EXPECT_EQ(k.eval(xi), 0.0);
  EXPECT_TRUE(k.is_even());
}

TEST(Spec, Errors) {
  EXPECT_THROW(KernelSpec::gaussian(0.0), std::invalid_argument);
  EXPECT_THROW(KernelSpec::gaussian(-1.0), std::invalid_argument);
  EXPECT_THROW(KernelSpec::histogram(1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(KernelSpec::gaussian(1.0).with_h(0.0), std::invalid_argument);
}

TEST(Spec, FamilyNames) {
  for (KernelFamily f : {KernelFamily::gaussian, KernelFamily::histogram, KernelFamily::table}) {
    EXPECT_EQ(kernel_family_from_string(to_string(f)), f);
  }
  EXPECT_THROW(kernel_family_from_string("laplace"), std::invalid_argument);
}

TEST(Spec, WithH) {
  const KernelSpec k = KernelSpec::histogram(1.0, 0.2).with_h(4.0);
  EXPECT_EQ(k.h(), 4.0);
  EXPECT_EQ(k.epsilon(), 0.2);
  EXPECT_EQ(k.family(), KernelFamily::histogram);
}

}  // namespace
}  // namespace rnf
