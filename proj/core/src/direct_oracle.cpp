#include "rnf/direct_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rnf/dynamics.hpp"
#include "rnf/numeric.hpp"
#include "rnf/rearrange.hpp"

namespace rnf {

namespace {

constexpr double kLevelSetTolerance = 1e-12;

void require_oracle_size(const Grid& g) {
  if (g.width() > kDirectOracleMaxSide || g.height() > kDirectOracleMaxSide) {
    throw std::invalid_argument("direct oracle is limited to grids of at most 64x64 pixels");
  }
}

}  // namespace

Grid direct_rhs(const Grid& u, const Grid& u0, double lambda, const KernelSpec& spec) {
  if (!u.same_shape(u0)) throw std::invalid_argument("direct_rhs: shape mismatch");
  require_oracle_size(u);
  const std::size_t n = u.size();
  Grid out(u.width(), u.height());
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t x = begin; x < end; ++x) {
      const double ux = u[x];
      double acc = 0.0;
      for (std::size_t y = 0; y < n; ++y) {
        const double d = u[y] - ux;
        acc += spec.eval(d) * d;
      }
      out[x] = acc + lambda * (u0[x] - ux);
    }
  });
  return out;
}

std::vector<Grid> direct_run_euler(const Grid& u0, double lambda, const KernelSpec& spec,
                                   double tau, int n_steps) {
  if (!(tau > 0.0)) throw std::invalid_argument("direct_run_euler: tau must be positive");
  if (n_steps < 0) throw std::invalid_argument("direct_run_euler: negative step count");
  require_oracle_size(u0);
  std::vector<Grid> traj;
  traj.reserve(static_cast<std::size_t>(n_steps) + 1);
  traj.push_back(u0);
  for (int n = 0; n < n_steps; ++n) {
    const Grid& cur = traj.back();
    const Grid vel = direct_rhs(cur, u0, lambda, spec);
    Grid next = cur;
    for (std::size_t i = 0; i < next.size(); ++i) next[i] += tau * vel[i];
    traj.push_back(std::move(next));
  }
  return traj;
}

EquivalenceReport compare_equivalence(const Grid& u0, double lambda, const KernelSpec& spec,
                                      double tau, int n_steps) {
  require_oracle_size(u0);
  const std::vector<Grid> direct = direct_run_euler(u0, lambda, spec, tau, n_steps);

  const QuantizedImage img = quantize(u0);
  const RearrangedProfile profile = decreasing_rearrangement(img);
  const std::vector<double> mu = profile.measures_real();
  const std::vector<double>& c0 = profile.levels;

  // Pixels grouped by their initial level; a pair within a group is flagged
  // once if it ever separates.
  std::vector<std::vector<std::size_t>> groups(img.level_count());
  for (std::size_t i = 0; i < img.pixel_count(); ++i) groups[img.level_index[i]].push_back(i);
  std::vector<std::vector<bool>> diverged(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const std::size_t m = groups[g].size();
    diverged[g].assign(m * (m - 1) / 2, false);
  }

  EquivalenceReport report;
  report.level_count = img.level_count();
  report.steps = n_steps;

  std::vector<double> c = c0;
  for (int n = 0; n <= n_steps; ++n) {
    const Grid& u = direct[static_cast<std::size_t>(n)];
    for (std::size_t i = 0; i < u.size(); ++i) {
      report.max_abs_gap = std::max(report.max_abs_gap, std::abs(u[i] - c[img.level_index[i]]));
    }
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const auto& members = groups[g];
      std::size_t pair = 0;
      for (std::size_t a = 0; a < members.size(); ++a) {
        for (std::size_t b = a + 1; b < members.size(); ++b, ++pair) {
          if (!diverged[g][pair] && std::abs(u[members[a]] - u[members[b]]) > kLevelSetTolerance) {
            diverged[g][pair] = true;
            ++report.level_set_violations;
          }
        }
      }
    }
    if (n == n_steps) break;
    const std::vector<double> vel = rhs(c, mu, c0, lambda, spec);
    for (std::size_t j = 0; j < c.size(); ++j) c[j] += tau * vel[j];
  }
  return report;
}

}  // namespace rnf
