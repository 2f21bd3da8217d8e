#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "rnf/asymptotics.hpp"
#include "rnf/dynamics.hpp"

namespace rnf {
namespace {

SmoothProfile linear() { return SmoothProfile::polynomial(1.0, {1.0, -1.0}); }
SmoothProfile cubic() { return SmoothProfile::polynomial(1.0, {1.0, -1.0, 0.0, -0.3}); }

double brute_force_I(const SmoothProfile& p, double s, double h, std::size_t n = 1000000) {
  const double us = p.value(s);
  return testing::midpoint_rule(
      [&](double sigma) {
        const double d = p.value(sigma) - us;
        return std::exp(-(d * d) / (h * h)) * d;
      },
      0.0, p.measure(), n);
}

TEST(Profile, PolynomialDerivatives) {
  const SmoothProfile p = cubic();
  EXPECT_DOUBLE_EQ(p.value(0.5), 1.0 - 0.5 - 0.3 * 0.125);
  EXPECT_DOUBLE_EQ(p.first(0.5), -1.0 - 0.9 * 0.25);
  EXPECT_DOUBLE_EQ(p.second(0.5), -1.8 * 0.5);
}

TEST(Profile, RejectsNonDecreasingInput) {
  EXPECT_THROW(SmoothProfile::polynomial(1.0, {0.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(SmoothProfile::polynomial(0.0, {1.0, -1.0}), std::invalid_argument);
  EXPECT_THROW(SmoothProfile::sampled(1.0, {3, 2, 2, 1, 0}), std::invalid_argument);
  EXPECT_THROW(SmoothProfile::sampled(1.0, {3, 2, 1}), std::invalid_argument);
  EXPECT_THROW(SmoothProfile::analytic(
                   1.0, [](double s) { return (s - 0.5) * (s - 0.5); },
                   [](double s) { return 2 * (s - 0.5); }, [](double) { return 2.0; }),
               std::invalid_argument);
}

TEST(Profile, SampledApproximatesAnalytic) {
  const SmoothProfile exact = cubic();
  std::vector<double> samples(2001);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    samples[i] = exact.value(static_cast<double>(i) / 2000.0);
  }
  const SmoothProfile sp = SmoothProfile::sampled(1.0, samples);
  for (double s : {0.1, 0.3337, 0.5, 0.9}) {
    EXPECT_NEAR(sp.value(s), exact.value(s), 1e-12);
    EXPECT_NEAR(sp.first(s), exact.first(s), 1e-9);
    EXPECT_NEAR(sp.second(s), exact.second(s), 1e-6);
  }
}

TEST(IntegralI, LinearSymmetricPointVanishes) {
  const QuadratureResult r = integral_I(linear(), 0.5, KernelSpec::gaussian(0.1));
  EXPECT_NEAR(r.value, 0.0, r.tolerance);
  EXPECT_GE(r.panels, 2048);
}

TEST(IntegralI, LinearMatchesMidpointOracle) {
  const QuadratureResult r = integral_I(linear(), 0.25, KernelSpec::gaussian(0.1));
  const double ref = brute_force_I(linear(), 0.25, 0.1);
  EXPECT_NE(r.value, 0.0);
  EXPECT_NEAR(r.value, ref, 1e-8 * std::abs(ref));
}

TEST(IntegralI, CubicMatchesMidpointOracle) {
  for (double h : {0.2, 0.05}) {
    const QuadratureResult r = integral_I(cubic(), 0.5, KernelSpec::gaussian(h));
    const double ref = brute_force_I(cubic(), 0.5, h);
    EXPECT_NEAR(r.value, ref, 1e-8 * std::abs(ref));
    EXPECT_LE(r.error_estimate, r.tolerance);
  }
}

TEST(IntegralI, PiecewiseConstantLimit) {
  const SmoothProfile p = cubic();
  const std::size_t q = 4096;
  std::vector<double> c(q), mu(q, 1.0 / static_cast<double>(q));
  for (std::size_t j = 0; j < q; ++j) c[j] = p.value((static_cast<double>(j) + 0.5) / q);
  const std::size_t j = q / 2;  // cell centred at s = (j + 1/2) / q
  const double s = (static_cast<double>(j) + 0.5) / q;
  const KernelSpec k = KernelSpec::gaussian(0.1);
  const double levels_side = rhs(c, mu, c, 0.0, k)[j];
  const double I = integral_I(p, s, k).value;
  EXPECT_NEAR(levels_side, I, 1e-3 * std::abs(I));
}

TEST(IntegralI, DomainRescaling) {
  // v(sigma) = u(sigma / 2) on (0, 2): I_v(2s) = 2 I_u(s).
  const SmoothProfile wide = SmoothProfile::polynomial(2.0, {1.0, -0.5, 0.0, -0.3 / 8.0});
  for (double h : {0.1, 0.05}) {
    const KernelSpec k = KernelSpec::gaussian(h);
    EXPECT_NEAR(integral_I(wide, 1.0, k).value, 2.0 * integral_I(cubic(), 0.5, k).value, 1e-12);
  }
}

TEST(IntegralI, Errors) {
  EXPECT_THROW(integral_I(cubic(), 0.0, KernelSpec::gaussian(0.1)), std::invalid_argument);
  EXPECT_THROW(integral_I(cubic(), 1.0, KernelSpec::gaussian(0.1)), std::invalid_argument);
  try {
    integral_I(cubic(), 0.5, KernelSpec::gaussian(0.1), 1e-30);
    FAIL() << "expected QuadratureError";
  } catch (const QuadratureError& e) {
    EXPECT_GT(e.estimate(), 0.0);
  }
}

TEST(Ktilde, Signs) {
  const KernelSpec k = KernelSpec::gaussian(0.1);
  EXPECT_EQ(ktilde(linear(), 0.5, k), 0.0);
  EXPECT_LT(ktilde(linear(), 0.05, k), 0.0);
  EXPECT_GT(ktilde(linear(), 0.95, k), 0.0);
  EXPECT_LT(ktilde(cubic(), 0.02, k), 0.0);
  EXPECT_GT(ktilde(cubic(), 0.98, k), 0.0);
}

TEST(Ktilde, ClosedFormForLinearProfile) {
  const KernelSpec k = KernelSpec::gaussian(0.1);
  const double s = 0.3;
  // |u'| = 1 at both ends; distances 0.7 and 0.3.
  EXPECT_NEAR(ktilde(linear(), s, k), std::exp(-49.0) - std::exp(-9.0), 1e-18);
}

TEST(Ktilde, VanishingSlopeIsAnError) {
  // u = 1 - s^3 has u'(0) = 0.
  const SmoothProfile flat_start = SmoothProfile::polynomial(1.0, {1.0, 0.0, 0.0, -1.0});
  EXPECT_THROW(ktilde(flat_start, 0.5, KernelSpec::gaussian(0.1)), std::domain_error);
}

TEST(Expansion, LinearInteriorNearlyZero) {
  const KernelSpec k = KernelSpec::gaussian(0.02);
  const double v = expansion_rhs(linear(), 0.5, 0.0, linear().value(0.5), k);
  EXPECT_NEAR(v, 0.0, 1e-200);
}

TEST(Expansion, Terms) {
  const SmoothProfile p = cubic();
  const double h = 0.1, s = 0.5;
  const KernelSpec k = KernelSpec::gaussian(h);
  const ExpansionTerms t = expansion_terms(p, s, 0.7, p.value(s), k);
  EXPECT_EQ(t.fidelity, 0.0);
  EXPECT_NEAR(t.ktilde_term, ktilde(p, s, k) * h * h / (2.0 * std::sqrt(std::numbers::pi)), 1e-18);
  const double slope = std::abs(p.first(s));
  EXPECT_NEAR(t.antidiffusion_term, -p.second(s) / (slope * slope * slope) * h * h * h, 1e-15);
  // u'' < 0 here, so the h^3 term is positive: opposite sign to the curvature.
  EXPECT_GT(t.antidiffusion_term, 0.0);
  EXPECT_DOUBLE_EQ(expansion_rhs(p, s, 0.7, p.value(s) + 2.0, k), t.total() + 1.4);
}

TEST(Expansion, KappaVariant) {
  const SmoothProfile p = cubic();
  const double h = 0.05, s = 0.5;
  const KernelSpec k = KernelSpec::gaussian(h);
  const ExpansionTerms t = expansion_terms(p, s, 0.0, p.value(s), k, ExpansionConstants::kappa);
  const double kappa = h * std::sqrt(std::numbers::pi) * std::erf(1.0 / std::sqrt(h));
  const double slope = std::abs(p.first(s));
  EXPECT_NEAR(t.antidiffusion_term, -p.second(s) / (slope * slope * slope) * h * h * kappa / 2.0,
              1e-15);
  EXPECT_NEAR(t.ktilde_term, ktilde(p, s, k) * h * h / 2.0, 1e-18);
}

TEST(Expansion, Errors) {
  const SmoothProfile p = cubic();
  EXPECT_THROW(expansion_rhs(p, 0.5, 0.0, 0.0, KernelSpec::histogram(0.1, 0.01)),
               std::invalid_argument);
  EXPECT_THROW(expansion_rhs(p, 1.5, 0.0, 0.0, KernelSpec::gaussian(0.1)), std::invalid_argument);
}

TEST(OrderStudy, CubicProfile) {
  const OrderStudy study =
      residual_order_study(cubic(), 0.5, KernelSpec::gaussian(1.0), {0.2, 0.1, 0.05, 0.025});
  ASSERT_EQ(study.rows.size(), 4u);
  EXPECT_TRUE(std::isnan(study.rows[0].observed_order));
  for (std::size_t i = 1; i < study.rows.size(); ++i) {
    const auto& prev = study.rows[i - 1];
    const auto& row = study.rows[i];
    EXPECT_DOUBLE_EQ(row.observed_order, std::log2(prev.residual / row.residual));
    EXPECT_LT(row.residual, prev.residual);
    EXPECT_FALSE(row.inconclusive);
  }
  const double finest = study.rows.back().observed_order;
  EXPECT_GE(finest, 3.0);
  EXPECT_LE(finest, 4.5);
  EXPECT_TRUE(study.order_at_least_three);
  for (const auto& row : study.rows) {
    EXPECT_NEAR(row.residual,
                std::abs(row.integral - (row.ktilde_term + row.antidiffusion_term)), 1e-18);
  }
}

TEST(OrderStudy, LinearProfileResidualIsTiny) {
  const OrderStudy study =
      residual_order_study(linear(), 0.3, KernelSpec::gaussian(1.0), {0.08, 0.04, 0.02});
  EXPECT_LT(study.rows[0].residual, 1e-3);
  for (std::size_t i = 1; i < study.rows.size(); ++i) {
    EXPECT_LT(study.rows[i].residual, 1e-12);
  }
}

TEST(OrderStudy, RejectsBadWindowLists) {
  const KernelSpec k = KernelSpec::gaussian(1.0);
  EXPECT_THROW(residual_order_study(cubic(), 0.5, k, {0.2, 0.15, 0.05}), std::invalid_argument);
  EXPECT_THROW(residual_order_study(cubic(), 0.5, k, {0.1, 0.2}), std::invalid_argument);
  EXPECT_THROW(residual_order_study(cubic(), 0.5, k, {0.1}), std::invalid_argument);
  EXPECT_THROW(residual_order_study(cubic(), 0.5, k, {0.1, -0.05}), std::invalid_argument);
}

}  // namespace
}  // namespace rnf
