#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "rnf/kernels.hpp"

namespace rnf {

/// Strictly decreasing smooth profile u* on (0, measure) with its first two
/// derivatives.
class SmoothProfile {
public:
  using Fn = std::function<double(double)>;

  static SmoothProfile analytic(double measure, Fn value, Fn first, Fn second);
  /// Uniform samples over [0, measure] (both endpoints included, >= 5 samples).
  /// Values use cubic Lagrange interpolation; derivatives use fourth-order
  /// finite differences.
  static SmoothProfile sampled(double measure, std::vector<double> samples);
  /// u*(s) = sum_i coeffs[i] s^i.
  static SmoothProfile polynomial(double measure, std::vector<double> coeffs);

  double measure() const noexcept { return measure_; }
  double value(double s) const { return value_(s); }
  double first(double s) const { return first_(s); }
  double second(double s) const { return second_(s); }

private:
  SmoothProfile(double measure, Fn value, Fn first, Fn second);

  double measure_;
  Fn value_;
  Fn first_;
  Fn second_;
};

class QuadratureError : public std::runtime_error {
public:
  QuadratureError(const std::string& what, double estimate)
      : std::runtime_error(what), estimate_(estimate) {}
  double estimate() const noexcept { return estimate_; }

private:
  double estimate_;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  double tolerance = 0.0;  ///< absolute target: rel_tol times the integrand's L1 mass
  int panels = 0;
};

/// Composite Simpson with panel doubling (from 2048 panels) and a Richardson
/// correction, stopped when the estimated error falls below rel_tol times the
/// L1 mass of the integrand.
QuadratureResult integral_I(const SmoothProfile& profile, double s, const KernelSpec& spec,
                            double rel_tol = 1e-10);

/// Boundary term
///   K_h(u*(|O|) - u*(s)) / |u*'(|O|)|  -  K_h(u*(0) - u*(s)) / |u*'(0)|.
double ktilde(const SmoothProfile& profile, double s, const KernelSpec& spec);

/// Constants of the small-h expansion.
enum class ExpansionConstants {
  nominal,  ///< alpha1 = 1/(2 sqrt(pi)), alpha2 = 1
  kappa,    ///< alpha1 = 1/2, alpha2 h^3 = h^2 kappa(h) / 2 with kappa(h) = h sqrt(pi) erf(h^{-1/2})
};

struct ExpansionTerms {
  double fidelity = 0.0;
  double ktilde_term = 0.0;        ///< alpha1 ktilde h^2
  double antidiffusion_term = 0.0; ///< -alpha2 u*''/|u*'|^3 h^3
  double total() const noexcept { return fidelity + ktilde_term + antidiffusion_term; }
};

ExpansionTerms expansion_terms(const SmoothProfile& profile, double s, double lambda,
                               double u0star_at_s, const KernelSpec& spec,
                               ExpansionConstants constants = ExpansionConstants::nominal);

/// lambda (u0*(s) - u*(s)) + alpha1 ktilde h^2 - alpha2 u*''/|u*'|^3 h^3.
double expansion_rhs(const SmoothProfile& profile, double s, double lambda, double u0star_at_s,
                     const KernelSpec& spec,
                     ExpansionConstants constants = ExpansionConstants::nominal);

struct OrderStudyRow {
  double h = 0.0;
  double integral = 0.0;
  double ktilde_term = 0.0;
  double antidiffusion_term = 0.0;
  double residual = 0.0;
  double observed_order = 0.0;  ///< NaN on the first row
  bool inconclusive = false;    ///< residual within 10x of the quadrature error
};

struct OrderStudy {
  std::vector<OrderStudyRow> rows;
  /// observed_order >= 3 on the finest conclusive pair.
  bool order_at_least_three = false;
};

/// Residual |I - (ktilde term + antidiffusion term)| over a strictly
/// decreasing geometric list of windows. Throws std::invalid_argument for a
/// non-geometric list.
OrderStudy residual_order_study(const SmoothProfile& profile, double s, const KernelSpec& family,
                                const std::vector<double>& hs,
                                ExpansionConstants constants = ExpansionConstants::nominal);

}  // namespace rnf
