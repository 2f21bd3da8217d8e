#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "rnf/numeric.hpp"

namespace rnf {

double weighted_sum(std::span<const double> values, std::span<const double> weights) {
  if (values.size() != weights.size()) {
    throw std::invalid_argument("weighted_sum: size mismatch");
  }
  CompensatedSum acc;
  for (std::size_t i = 0; i < values.size(); ++i) acc.add(values[i] * weights[i]);
  return acc.value();
}

std::size_t worker_count() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("RNF_THREADS")) {
    try {
      const long cap = std::stol(env);
      if (cap >= 1) n = std::min(n, static_cast<std::size_t>(cap));
    } catch (const std::exception&) {
      // ignore malformed caps
    }
  }
  return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
  const std::size_t workers = std::min(worker_count(), n);
  if (workers <= 1) {
    if (n > 0) body(0, n);
    return;
  }
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t begin = 0; begin < n; begin += chunk) {
    pool.emplace_back(body, begin, std::min(n, begin + chunk));
  }
  for (auto& t : pool) t.join();
}

}  // namespace rnf
