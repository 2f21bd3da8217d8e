#include "rnf/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace rnf {

namespace {

constexpr int kInitialPanels = 2048;
constexpr int kMaxPanels = 1 << 22;

void require_gaussian(const KernelSpec& spec, const char* who) {
  if (spec.family() != KernelFamily::gaussian) {
    throw std::invalid_argument(std::string(who) + ": the expansion is derived for the gaussian kernel");
  }
}

void require_interior(const SmoothProfile& p, double s, const char* who) {
  if (!(s > 0.0 && s < p.measure())) {
    throw std::invalid_argument(std::string(who) + ": s must lie strictly inside (0, |Omega|)");
  }
}

// Cubic Lagrange interpolation on uniform nodes, clamped to the 4-point
// stencil nearest to x.
double lagrange4(const std::vector<double>& y, double step, double x) {
  const auto n = static_cast<long>(y.size());
  long i0 = static_cast<long>(std::floor(x / step)) - 1;
  i0 = std::clamp(i0, 0L, n - 4);
  double out = 0.0;
  for (long a = 0; a < 4; ++a) {
    double w = 1.0;
    const double xa = static_cast<double>(i0 + a) * step;
    for (long b = 0; b < 4; ++b) {
      if (b == a) continue;
      const double xb = static_cast<double>(i0 + b) * step;
      w *= (x - xb) / (xa - xb);
    }
    out += w * y[static_cast<std::size_t>(i0 + a)];
  }
  return out;
}

// Fourth-order finite differences at every node (one-sided near the ends).
std::vector<double> differentiate(const std::vector<double>& y, double step) {
  const std::size_t n = y.size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= 2 && i + 2 < n) {
      d[i] = (y[i - 2] - 8.0 * y[i - 1] + 8.0 * y[i + 1] - y[i + 2]) / (12.0 * step);
    } else if (i < 2) {
      d[i] = (-25.0 * y[i] + 48.0 * y[i + 1] - 36.0 * y[i + 2] + 16.0 * y[i + 3] - 3.0 * y[i + 4]) /
             (12.0 * step);
    } else {
      d[i] = (25.0 * y[i] - 48.0 * y[i - 1] + 36.0 * y[i - 2] - 16.0 * y[i - 3] + 3.0 * y[i - 4]) /
             (12.0 * step);
    }
  }
  return d;
}

}  // namespace

SmoothProfile::SmoothProfile(double measure, Fn value, Fn first, Fn second)
    : measure_(measure), value_(std::move(value)), first_(std::move(first)), second_(std::move(second)) {
  if (!(measure > 0.0) || !std::isfinite(measure)) {
    throw std::invalid_argument("SmoothProfile: domain measure must be positive");
  }
}

SmoothProfile SmoothProfile::analytic(double measure, Fn value, Fn first, Fn second) {
  SmoothProfile p(measure, std::move(value), std::move(first), std::move(second));
  constexpr int kChecks = 4096;
  double prev = p.value(0.0);
  for (int i = 1; i <= kChecks; ++i) {
    const double cur = p.value(measure * i / kChecks);
    if (!(cur < prev)) throw std::invalid_argument("SmoothProfile: profile must be strictly decreasing");
    prev = cur;
  }
  return p;
}

SmoothProfile SmoothProfile::sampled(double measure, std::vector<double> samples) {
  if (samples.size() < 5) throw std::invalid_argument("SmoothProfile: need at least 5 samples");
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (!(samples[i] < samples[i - 1])) {
      throw std::invalid_argument("SmoothProfile: samples must be strictly decreasing");
    }
  }
  const double step = measure / static_cast<double>(samples.size() - 1);
  auto d1 = differentiate(samples, step);
  auto d2 = differentiate(d1, step);
  auto y = std::make_shared<const std::vector<double>>(std::move(samples));
  auto y1 = std::make_shared<const std::vector<double>>(std::move(d1));
  auto y2 = std::make_shared<const std::vector<double>>(std::move(d2));
  return SmoothProfile(
      measure, [y, step](double s) { return lagrange4(*y, step, s); },
      [y1, step](double s) { return lagrange4(*y1, step, s); },
      [y2, step](double s) { return lagrange4(*y2, step, s); });
}

SmoothProfile SmoothProfile::polynomial(double measure, std::vector<double> coeffs) {
  if (coeffs.empty()) throw std::invalid_argument("SmoothProfile: empty polynomial");
  auto a = std::make_shared<const std::vector<double>>(std::move(coeffs));
  auto horner = [](const std::vector<double>& c, double s) {
    double v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * s + *it;
    return v;
  };
  std::vector<double> da;
  for (std::size_t i = 1; i < a->size(); ++i) da.push_back(static_cast<double>(i) * (*a)[i]);
  std::vector<double> dda;
  for (std::size_t i = 1; i < da.size(); ++i) dda.push_back(static_cast<double>(i) * da[i]);
  auto pd = std::make_shared<const std::vector<double>>(std::move(da));
  auto pdd = std::make_shared<const std::vector<double>>(std::move(dda));
  return analytic(
      measure, [a, horner](double s) { return horner(*a, s); },
      [pd, horner](double s) { return horner(*pd, s); },
      [pdd, horner](double s) { return horner(*pdd, s); });
}

QuadratureResult integral_I(const SmoothProfile& profile, double s, const KernelSpec& spec,
                            double rel_tol) {
  require_interior(profile, s, "integral_I");
  const double z = profile.value(s);
  const double length = profile.measure();
  auto f = [&](double sigma) {
    const double d = profile.value(sigma) - z;
    return spec.eval(d) * d;
  };

  // Trapezoid sums refined by halving; Simpson with n panels is
  // (4 T_{2n} - T_n) / 3 over 2n subintervals.
  int intervals = kInitialPanels;
  double step = length / intervals;
  double sum = 0.5 * (f(0.0) + f(length));
  double abs_sum = 0.5 * (std::abs(f(0.0)) + std::abs(f(length)));
  for (int i = 1; i < intervals; ++i) {
    const double v = f(step * i);
    sum += v;
    abs_sum += std::abs(v);
  }
  auto refine = [&]() {
    double mid = 0.0;
    double abs_mid = 0.0;
    for (int i = 0; i < intervals; ++i) {
      const double v = f(step * (i + 0.5));
      mid += v;
      abs_mid += std::abs(v);
    }
    sum += mid;
    abs_sum += abs_mid;
    intervals *= 2;
    step *= 0.5;
  };

  double trap_coarse = sum * step;
  refine();
  double trap_fine = sum * step;
  double simpson_coarse = (4.0 * trap_fine - trap_coarse) / 3.0;
  for (;;) {
    trap_coarse = trap_fine;
    refine();
    trap_fine = sum * step;
    const double simpson_fine = (4.0 * trap_fine - trap_coarse) / 3.0;
    const double estimate = std::abs(simpson_fine - simpson_coarse) / 15.0;
    const double mass = abs_sum * step;
    const double target = rel_tol * mass;
    const double value = simpson_fine + (simpson_fine - simpson_coarse) / 15.0;
    if (estimate <= target) {
      return QuadratureResult{value, estimate, target, intervals / 2};
    }
    if (intervals / 2 >= kMaxPanels) {
      throw QuadratureError("integral_I: quadrature did not converge", value);
    }
    simpson_coarse = simpson_fine;
  }
}

double ktilde(const SmoothProfile& profile, double s, const KernelSpec& spec) {
  const double slope_end = std::abs(profile.first(profile.measure()));
  const double slope_start = std::abs(profile.first(0.0));
  if (!(slope_end > 0.0) || !(slope_start > 0.0)) {
    throw std::domain_error("ktilde: profile slope vanishes at an endpoint");
  }
  const double z = profile.value(s);
  return spec.eval(profile.value(profile.measure()) - z) / slope_end -
         spec.eval(profile.value(0.0) - z) / slope_start;
}

ExpansionTerms expansion_terms(const SmoothProfile& profile, double s, double lambda,
                               double u0star_at_s, const KernelSpec& spec,
                               ExpansionConstants constants) {
  require_gaussian(spec, "expansion_terms");
  require_interior(profile, s, "expansion_terms");
  const double slope = profile.first(s);
  if (slope == 0.0) throw std::domain_error("expansion_terms: zero slope at s");
  const double h = spec.h();
  const double shock = profile.second(s) / std::pow(std::abs(slope), 3);

  double alpha1 = 0.5 / std::sqrt(std::numbers::pi);
  double alpha2_h3 = h * h * h;
  if (constants == ExpansionConstants::kappa) {
    alpha1 = 0.5;
    const double kappa = h * std::sqrt(std::numbers::pi) * std::erf(1.0 / std::sqrt(h));
    alpha2_h3 = 0.5 * h * h * kappa;
  }

  ExpansionTerms t;
  t.fidelity = lambda * (u0star_at_s - profile.value(s));
  t.ktilde_term = alpha1 * ktilde(profile, s, spec) * h * h;
  t.antidiffusion_term = -shock * alpha2_h3;
  return t;
}

double expansion_rhs(const SmoothProfile& profile, double s, double lambda, double u0star_at_s,
                     const KernelSpec& spec, ExpansionConstants constants) {
  return expansion_terms(profile, s, lambda, u0star_at_s, spec, constants).total();
}

OrderStudy residual_order_study(const SmoothProfile& profile, double s, const KernelSpec& family,
                                const std::vector<double>& hs, ExpansionConstants constants) {
  require_gaussian(family, "residual_order_study");
  if (hs.size() < 2) throw std::invalid_argument("residual_order_study: need at least two windows");
  for (double h : hs) {
    if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("residual_order_study: windows must be positive");
  }
  const double ratio = hs[0] / hs[1];
  if (!(ratio > 1.0)) throw std::invalid_argument("residual_order_study: windows must decrease");
  for (std::size_t i = 1; i < hs.size(); ++i) {
    const double r = hs[i - 1] / hs[i];
    if (std::abs(r - ratio) > 1e-9 * ratio) {
      throw std::invalid_argument("residual_order_study: window list is not geometric");
    }
  }

  OrderStudy study;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const KernelSpec spec = family.with_h(hs[i]);
    const QuadratureResult quad = integral_I(profile, s, spec);
    const ExpansionTerms terms = expansion_terms(profile, s, 0.0, profile.value(s), spec, constants);
    OrderStudyRow row;
    row.h = hs[i];
    row.integral = quad.value;
    row.ktilde_term = terms.ktilde_term;
    row.antidiffusion_term = terms.antidiffusion_term;
    row.residual = std::abs(quad.value - (terms.ktilde_term + terms.antidiffusion_term));
    row.inconclusive = row.residual < 10.0 * quad.tolerance;
    row.observed_order = std::numeric_limits<double>::quiet_NaN();
    if (i > 0) {
      const auto& prev = study.rows.back();
      row.observed_order = std::log(prev.residual / row.residual) / std::log(prev.h / row.h);
    }
    study.rows.push_back(row);
  }

  for (std::size_t i = study.rows.size(); i-- > 1;) {
    const auto& fine = study.rows[i];
    const auto& coarse = study.rows[i - 1];
    if (fine.inconclusive || coarse.inconclusive) continue;
    study.order_at_least_three = fine.observed_order >= 3.0;
    break;
  }
  return study;
}

}  // namespace rnf
