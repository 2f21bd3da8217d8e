#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>

namespace rnf {

/// Neumaier compensated summation.
class CompensatedSum {
public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + compensation_; }

private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

/// Compensated weighted sum  sum_j weights[j] * values[j].
double weighted_sum(std::span<const double> values, std::span<const double> weights);

/// Worker count honoring the RNF_THREADS environment cap (>= 1).
std::size_t worker_count();

/// Runs body(begin, end) over contiguous chunks of [0, n). Chunks are
/// disjoint, so results are deterministic whenever body writes only to its
/// own indices.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace rnf
