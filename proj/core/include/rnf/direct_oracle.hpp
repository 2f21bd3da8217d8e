#pragma once

#include <cstddef>
#include <vector>

#include "rnf/grid.hpp"
#include "rnf/kernels.hpp"

namespace rnf {

/// Largest side accepted by the O(P^2) per-pixel integrator.
inline constexpr std::size_t kDirectOracleMaxSide = 64;

/// Per-pixel velocity of the full problem:
///   sum_y K_h(u(y) - u(x))(u(y) - u(x)) + lambda (u0(x) - u(x)).
Grid direct_rhs(const Grid& u, const Grid& u0, double lambda, const KernelSpec& spec);

/// Explicit Euler iterates u^0 = u0, ..., u^{n_steps}.
std::vector<Grid> direct_run_euler(const Grid& u0, double lambda, const KernelSpec& spec,
                                   double tau, int n_steps);

struct EquivalenceReport {
  double max_abs_gap = 0.0;
  std::size_t level_set_violations = 0;
  std::size_t level_count = 0;
  int steps = 0;
};

/// Runs explicit Euler on the pixel grid and on the rearranged level system
/// with the same step, and compares them pixel by pixel at every step.
EquivalenceReport compare_equivalence(const Grid& u0, double lambda, const KernelSpec& spec,
                                      double tau, int n_steps);

}  // namespace rnf
