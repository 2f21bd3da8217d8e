#include "rnf/dynamics.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rnf/numeric.hpp"

namespace rnf {

namespace {

constexpr double kMinTau = 1e-15;
constexpr double kOrderRoundoff = 64.0 * std::numeric_limits<double>::epsilon();

// Levels that collapse onto each other can cross by a few ulps after a
// solve; such crossings are snapped to ties. A larger inversion means the
// step itself is wrong.
void enforce_order(std::vector<double>& c, double roundoff) {
  for (std::size_t j = 1; j < c.size(); ++j) {
    if (c[j] > c[j - 1]) {
      if (c[j] - c[j - 1] > roundoff) {
        throw SolverError("level order violated by " + std::to_string(c[j] - c[j - 1]) +
                          " between levels " + std::to_string(j) + " and " + std::to_string(j + 1));
      }
      c[j] = c[j - 1];
    }
  }
}

void require_same_size(std::size_t a, std::size_t b, std::size_t c, const char* who) {
  if (a != b || a != c) {
    throw std::invalid_argument(std::string(who) + ": level, measure and initial vectors differ in size");
  }
}

// Fills weights(j, k) = K_h(c_k - c_j) for k != j; the diagonal is unused.
void kernel_matrix(std::span<const double> c, const KernelSpec& spec, Eigen::MatrixXd& weights) {
  const auto q = static_cast<Eigen::Index>(c.size());
  weights.resize(q, q);
  if (spec.is_even()) {
    for (Eigen::Index j = 0; j < q; ++j) {
      weights(j, j) = 0.0;
      for (Eigen::Index k = j + 1; k < q; ++k) {
        const double w = spec.eval(c[k] - c[j]);
        weights(j, k) = w;
        weights(k, j) = w;
      }
    }
  } else {
    for (Eigen::Index j = 0; j < q; ++j) {
      for (Eigen::Index k = 0; k < q; ++k) {
        weights(j, k) = j == k ? 0.0 : spec.eval(c[k] - c[j]);
      }
    }
  }
}

}  // namespace

std::string to_string(Termination t) {
  return t == Termination::energy_stabilized ? "energy_stabilized" : "max_steps";
}

void SolverConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("solver.lambda must be >= 0");
  if (tau0 && !(*tau0 > 0.0)) throw std::invalid_argument("solver.tau0 must be positive");
  if (!(tau_max > 0.0)) throw std::invalid_argument("solver.tau_max must be positive");
  if (!(fp_tol > 0.0)) throw std::invalid_argument("solver.fp_tol must be positive");
  if (fp_max_iter < 1) throw std::invalid_argument("solver.fp_max_iter must be >= 1");
  if (max_steps < 1) throw std::invalid_argument("solver.max_steps must be >= 1");
  if (!(energy_tol >= 0.0)) throw std::invalid_argument("solver.energy_tol must be >= 0");
  if (record_every < 1) throw std::invalid_argument("solver.record_every must be >= 1");
}

std::vector<double> rhs(std::span<const double> c, std::span<const double> mu,
                        std::span<const double> c0, double lambda, const KernelSpec& spec) {
  require_same_size(c.size(), mu.size(), c0.size(), "rhs");
  const std::size_t q = c.size();
  std::vector<double> out(q, 0.0);
  for (std::size_t j = 0; j < q; ++j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < q; ++k) {
      const double d = c[k] - c[j];
      acc += spec.eval(d) * d * mu[k];
    }
    out[j] = acc + lambda * (c0[j] - c[j]);
  }
  return out;
}

namespace {

// Reusable buffers for repeated steps on one level set. weights_ holds the
// kernel matrix at the last accepted state, which is also the first frozen
// matrix of the following step.
class Stepper {
public:
  Stepper(std::span<const double> mu, std::span<const double> c0, const KernelSpec& spec)
      : mu_(mu), c0_(c0), spec_(spec), q_(static_cast<Eigen::Index>(mu.size())),
        current_(q_), next_(q_), forcing_(q_), delta_(q_), system_(q_, q_), llt_(q_), lu_(q_) {}

  void set_state(std::span<const double> c) {
    kernel_matrix(c, spec_, weights_at_prev_);
  }

  const Eigen::MatrixXd& weights_at_prev() const { return weights_at_prev_; }

  StepOutcome step(std::span<const double> c_prev, double lambda, double tau, double fp_tol,
                   int fp_max_iter) {
    const auto q = q_;
    StepOutcome out;
    if (q == 1) {
      // No coupling term, so the first linear solve is already exact.
      out.levels = {(c_prev[0] + tau * lambda * c0_[0]) / (1.0 + tau * lambda)};
      out.inner_iterations = 1;
      out.converged = true;
      out.last_update = std::abs(out.levels[0] - c_prev[0]);
      return out;
    }

    const Eigen::Map<const Eigen::VectorXd> prev(c_prev.data(), q);
    const Eigen::Map<const Eigen::VectorXd> measure(mu_.data(), q);
    const bool symmetric = spec_.is_even();

    // The linear system is solved for the increment delta = c^{n,m} - c^{n-1}:
    //   A(c^{n,m-1}) delta = tau [lambda (c0 - c^{n-1}) + W(c^{n,m-1}) applied to
    //   the differences c^{n-1}_k - c^{n-1}_j],
    // which is algebraically the same system but keeps round-off proportional
    // to the update rather than to the levels themselves.
    current_ = prev;
    for (int m = 1; m <= fp_max_iter; ++m) {
      if (m > 1) kernel_matrix({current_.data(), static_cast<std::size_t>(q)}, spec_, scratch_);
      const Eigen::MatrixXd& weights = m == 1 ? weights_at_prev_ : scratch_;
      for (Eigen::Index j = 0; j < q; ++j) {
        // Row j is scaled by mu_j in the symmetric case, which makes the matrix
        // symmetric and strictly diagonally dominant, hence SPD.
        const double scale = symmetric ? measure[j] : 1.0;
        double row = 0.0;
        double flux = 0.0;
        for (Eigen::Index k = 0; k < q; ++k) {
          const double w = tau * (symmetric ? weights(k, j) : weights(j, k)) * measure[k] * scale;
          system_(k, j) = -w;
          row += w;
          flux += w * (prev[k] - prev[j]);
        }
        system_(j, j) = scale * (1.0 + tau * lambda) + row;
        forcing_[j] = flux + scale * tau * lambda * (c0_[static_cast<std::size_t>(j)] - prev[j]);
      }
      if (symmetric) {
        llt_.compute(system_);
        delta_ = llt_.solve(forcing_);
      } else {
        // Built column-wise above, so transpose back to rows.
        system_.transposeInPlace();
        lu_.compute(system_);
        delta_ = lu_.solve(forcing_);
      }
      next_ = prev + delta_;

      const double update = (next_ - current_).lpNorm<Eigen::Infinity>();
      current_.swap(next_);
      out.inner_iterations = m;
      out.last_update = update;
      if (!std::isfinite(update)) break;
      if (update < fp_tol) {
        out.converged = true;
        break;
      }
    }
    out.levels.assign(current_.data(), current_.data() + q);
    if (out.converged) {
      const double scale = std::max({1.0, current_.lpNorm<Eigen::Infinity>(),
                                     (current_ - prev).lpNorm<Eigen::Infinity>()});
      enforce_order(out.levels, kOrderRoundoff * scale);
    }
    return out;
  }

  // Energy of the state last passed to set_state().
  double energy_at_prev() const {
    CompensatedSum acc;
    const double k0 = spec_.eval(0.0);
    for (Eigen::Index j = 0; j < q_; ++j) {
      const double mj = mu_[static_cast<std::size_t>(j)];
      acc.add(k0 * mj * mj);
      for (Eigen::Index k = 0; k < q_; ++k) {
        if (k == j) continue;
        // weights(j, k) = K_h(c_k - c_j); the energy pairs g(c_j - c_k).
        acc.add(weights_at_prev_(k, j) * mj * mu_[static_cast<std::size_t>(k)]);
      }
    }
    return acc.value();
  }

private:
  std::span<const double> mu_;
  std::span<const double> c0_;
  const KernelSpec& spec_;
  Eigen::Index q_;
  Eigen::VectorXd current_, next_, forcing_, delta_;
  Eigen::MatrixXd weights_at_prev_, scratch_;
  Eigen::MatrixXd system_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

}  // namespace

StepOutcome step_semi_implicit(std::span<const double> c_prev, std::span<const double> mu,
                               std::span<const double> c0, double lambda, double tau,
                               double fp_tol, int fp_max_iter, const KernelSpec& spec) {
  require_same_size(c_prev.size(), mu.size(), c0.size(), "step_semi_implicit");
  if (!(tau > 0.0)) throw std::invalid_argument("step_semi_implicit: tau must be positive");
  Stepper stepper(mu, c0, spec);
  stepper.set_state(c_prev);
  return stepper.step(c_prev, lambda, tau, fp_tol, fp_max_iter);
}

double energy(std::span<const double> c, std::span<const double> mu, const KernelSpec& spec) {
  if (c.size() != mu.size()) throw std::invalid_argument("energy: size mismatch");
  const std::size_t q = c.size();
  CompensatedSum acc;
  if (spec.is_even()) {
    const double k0 = spec.eval(0.0);
    for (std::size_t j = 0; j < q; ++j) {
      acc.add(k0 * mu[j] * mu[j]);
      for (std::size_t k = j + 1; k < q; ++k) {
        acc.add(2.0 * spec.eval(c[j] - c[k]) * mu[j] * mu[k]);
      }
    }
  } else {
    for (std::size_t j = 0; j < q; ++j) {
      for (std::size_t k = 0; k < q; ++k) acc.add(spec.eval(c[j] - c[k]) * mu[j] * mu[k]);
    }
  }
  return acc.value();
}

double auto_tau0(std::span<const double> c, std::span<const double> mu, const KernelSpec& spec,
                 double tau_max) {
  if (c.size() != mu.size()) throw std::invalid_argument("auto_tau0: size mismatch");
  double peak = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    double row = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) row += spec.eval(c[k] - c[j]) * mu[k];
    peak = std::max(peak, row);
  }
  if (!(peak > 0.0)) return tau_max;
  return std::min(1.0 / peak, tau_max);
}

double adaptive_tau(int n, double energy_prev, double energy_prev2, double tau0, double tau_max) {
  if (n < 2) return tau0;
  const double delta = std::abs(energy_prev - energy_prev2);
  if (delta == 0.0) return tau_max;
  return std::min(tau0 / delta, tau_max);
}

Trajectory run_levels(std::span<const double> c0, std::span<const double> mu,
                      const SolverConfig& config, const KernelSpec& spec) {
  config.validate();
  if (c0.empty() || c0.size() != mu.size()) {
    throw std::invalid_argument("run: need matching nonempty level and measure vectors");
  }
  for (double m : mu) {
    if (!(m > 0.0)) throw std::invalid_argument("run: measures must be positive");
  }

  const double tau0 = config.tau0 ? *config.tau0 : auto_tau0(c0, mu, spec, config.tau_max);

  Trajectory traj;
  std::vector<double> c(c0.begin(), c0.end());
  Stepper stepper(mu, c0, spec);
  stepper.set_state(c);
  std::vector<double> energies{stepper.energy_at_prev()};
  double t = 0.0;

  auto record = [&](int step, double tau, int inner) {
    traj.steps.push_back(step);
    traj.times.push_back(t);
    traj.levels.push_back(c);
    traj.energies.push_back(energies.back());
    traj.taus.push_back(tau);
    traj.inner_iters.push_back(inner);
  };
  record(0, 0.0, 0);

  traj.termination = Termination::max_steps;
  for (int n = 1; n <= config.max_steps; ++n) {
    double tau = config.tau_policy == TauPolicy::fixed
                     ? tau0
                     : adaptive_tau(n, energies[n - 1], n >= 2 ? energies[n - 2] : 0.0, tau0,
                                    config.tau_max);
    StepOutcome outcome;
    for (;;) {
      outcome = stepper.step(c, config.lambda, tau, config.fp_tol, config.fp_max_iter);
      if (outcome.converged) break;
      tau *= 0.5;
      if (tau < kMinTau) {
        throw SolverError("fixed-point iteration failed to reach tolerance at step " +
                          std::to_string(n) + " (last update " +
                          std::to_string(outcome.last_update) + ") even with tau below 1e-15");
      }
    }
    c = std::move(outcome.levels);
    t += tau;
    stepper.set_state(c);
    energies.push_back(stepper.energy_at_prev());
    traj.total_steps = n;

    const bool stabilized = std::abs(energies[n] - energies[n - 1]) < config.energy_tol;
    const bool last = stabilized || n == config.max_steps;
    if (n % config.record_every == 0 || last) record(n, tau, outcome.inner_iterations);
    if (stabilized) {
      traj.termination = Termination::energy_stabilized;
      break;
    }
  }
  return traj;
}

Trajectory run(const RearrangedProfile& profile, const SolverConfig& config,
               const KernelSpec& spec) {
  profile.validate();
  const std::vector<double> mu = profile.measures_real();
  return run_levels(profile.levels, mu, config, spec);
}

}  // namespace rnf
