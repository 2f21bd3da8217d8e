#pragma once

#include <optional>
#include <string>
#include <vector>

namespace rnf {

enum class KernelFamily { gaussian, histogram, table };

std::string to_string(KernelFamily family);
KernelFamily kernel_family_from_string(const std::string& name);

/// Range kernel K_h(xi) = K(xi / h) acting on intensity differences.
///
/// Families:
///  - gaussian:  K(s) = exp(-s^2)
///  - histogram: K(s) = 1{s<0} (-s) / (s^2 + eps^2), a regularization of the
///    contrast-enhancing kernel sign^-(s)/s; eps is in units of s = xi/h
///  - table:     piecewise-linear interpolation over (s, K(s)) nodes with
///    clamped tails, optionally carrying a derivative column
class KernelSpec {
public:
  static KernelSpec gaussian(double h);
  static KernelSpec histogram(double h, double epsilon);
  static KernelSpec table(double h, std::vector<double> nodes, std::vector<double> values,
                          std::optional<std::vector<double>> derivatives = std::nullopt);
  /// Table kernel that vanishes identically.
  static KernelSpec zero(double h = 1.0);

  KernelFamily family() const noexcept { return family_; }
  double h() const noexcept { return h_; }
  double epsilon() const noexcept { return epsilon_; }

  /// Same family and shape parameters with a different window.
  KernelSpec with_h(double h) const;

  /// True when K(-s) == K(s) for all s, which makes the level system symmetric.
  bool is_even() const noexcept { return even_; }

  double eval(double xi) const;
  /// d/dxi K(xi / h). Throws std::logic_error for tables without derivative data.
  double eval_derivative(double xi) const;
  /// Flux Phi(s) = K_h(s) s.
  double phi(double s) const { return eval(s) * s; }
  /// Upper bound on sup |Phi'(s)|.
  double lipschitz_bound() const;

private:
  KernelSpec(KernelFamily family, double h);

  double shape(double s) const;
  double shape_derivative(double s) const;

  KernelFamily family_;
  double h_;
  double epsilon_ = 0.0;
  bool even_ = false;
  std::vector<double> nodes_;
  std::vector<double> values_;
  std::optional<std::vector<double>> derivatives_;
};

}  // namespace rnf
