#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rnf/kernels.hpp"
#include "rnf/rearrange.hpp"

namespace rnf {

enum class TauPolicy {
  adaptive,  ///< tau(n) = min(tau0 / |J(c^{n-1}) - J(c^{n-2})|, tau_max)
  fixed,     ///< tau(n) = tau0 for every step
};

struct SolverConfig {
  double lambda = 0.0;
  std::optional<double> tau0;  ///< nullopt selects the automatic initial step
  double tau_max = 1.0;
  TauPolicy tau_policy = TauPolicy::adaptive;
  double fp_tol = 1e-5;
  int fp_max_iter = 100;
  int max_steps = 1000;
  double energy_tol = 1e-10;
  int record_every = 1;

  void validate() const;
};

enum class Termination { max_steps, energy_stabilized };

std::string to_string(Termination t);

/// Recorded solver states. Entry 0 is the initial state (t = 0, tau = 0).
struct Trajectory {
  std::vector<int> steps;
  std::vector<double> times;
  std::vector<std::vector<double>> levels;
  std::vector<double> energies;
  std::vector<double> taus;
  std::vector<int> inner_iters;
  Termination termination = Termination::max_steps;
  int total_steps = 0;

  std::size_t size() const noexcept { return times.size(); }
  const std::vector<double>& final_levels() const { return levels.back(); }
};

class SolverError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Component j: sum_k K_h(c_k - c_j)(c_k - c_j) mu_k + lambda (c0_j - c_j).
std::vector<double> rhs(std::span<const double> c, std::span<const double> mu,
                        std::span<const double> c0, double lambda, const KernelSpec& spec);

struct StepOutcome {
  std::vector<double> levels;
  int inner_iterations = 0;
  bool converged = false;
  double last_update = 0.0;  ///< ||c^{n,m} - c^{n,m-1}||_inf at exit
};

/// One semi-implicit step of size tau. The nonlinear implicit system is
/// resolved by freezing the kernel weights at the previous fixed-point
/// iterate and solving the resulting linear system directly, repeated until
/// successive iterates differ by less than fp_tol in the sup norm.
StepOutcome step_semi_implicit(std::span<const double> c_prev, std::span<const double> mu,
                               std::span<const double> c0, double lambda, double tau,
                               double fp_tol, int fp_max_iter, const KernelSpec& spec);

/// J(c) = sum_j sum_k g(c_j - c_k) mu_j mu_k with g = K_h.
double energy(std::span<const double> c, std::span<const double> mu, const KernelSpec& spec);

/// (max_j sum_k K_h(c_k - c_j) mu_k)^{-1}, capped at tau_max.
double auto_tau0(std::span<const double> c, std::span<const double> mu, const KernelSpec& spec,
                 double tau_max);

/// Step size for step n (1-based) given J(c^{n-1}) and J(c^{n-2}).
double adaptive_tau(int n, double energy_prev, double energy_prev2, double tau0, double tau_max);

Trajectory run(const RearrangedProfile& profile, const SolverConfig& config,
               const KernelSpec& spec);

/// Same as run() but starting from explicit levels and real-valued measures.
Trajectory run_levels(std::span<const double> c0, std::span<const double> mu,
                      const SolverConfig& config, const KernelSpec& spec);

}  // namespace rnf
