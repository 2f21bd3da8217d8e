#include "rnf/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace rnf {

std::string to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::gaussian: return "gaussian";
    case KernelFamily::histogram: return "histogram";
    case KernelFamily::table: return "table";
  }
  return "unknown";
}

KernelFamily kernel_family_from_string(const std::string& name) {
  if (name == "gaussian") return KernelFamily::gaussian;
  if (name == "histogram") return KernelFamily::histogram;
  if (name == "table") return KernelFamily::table;
  throw std::invalid_argument("unknown kernel family '" + name + "'");
}

KernelSpec::KernelSpec(KernelFamily family, double h) : family_(family), h_(h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw std::invalid_argument("kernel window h must be positive and finite");
  }
}

KernelSpec KernelSpec::gaussian(double h) {
  KernelSpec k(KernelFamily::gaussian, h);
  k.even_ = true;
  return k;
}

KernelSpec KernelSpec::histogram(double h, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("histogram kernel epsilon must be positive");
  KernelSpec k(KernelFamily::histogram, h);
  k.epsilon_ = epsilon;
  return k;
}

KernelSpec KernelSpec::table(double h, std::vector<double> nodes, std::vector<double> values,
                             std::optional<std::vector<double>> derivatives) {
  if (nodes.size() < 2 || nodes.size() != values.size()) {
    throw std::invalid_argument("kernel table needs >= 2 nodes with matching values");
  }
  if (derivatives && derivatives->size() != nodes.size()) {
    throw std::invalid_argument("kernel table derivative column has the wrong length");
  }
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (!(nodes[i] > nodes[i - 1])) {
      throw std::invalid_argument("kernel table nodes must be strictly increasing");
    }
  }
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("kernel table values must be finite and nonnegative");
    }
  }
  KernelSpec k(KernelFamily::table, h);
  k.nodes_ = std::move(nodes);
  k.values_ = std::move(values);
  k.derivatives_ = std::move(derivatives);

  // Even iff the table mirrors itself about zero.
  const std::size_t n = k.nodes_.size();
  bool even = true;
  for (std::size_t i = 0; i < n && even; ++i) {
    even = k.nodes_[i] == -k.nodes_[n - 1 - i] && k.values_[i] == k.values_[n - 1 - i];
  }
  if (even && k.derivatives_) {
    for (std::size_t i = 0; i < n && even; ++i) {
      even = (*k.derivatives_)[i] == -(*k.derivatives_)[n - 1 - i];
    }
  }
  k.even_ = even;
  return k;
}

KernelSpec KernelSpec::zero(double h) {
  return table(h, {-1.0, 1.0}, {0.0, 0.0}, std::vector<double>{0.0, 0.0});
}

KernelSpec KernelSpec::with_h(double h) const {
  KernelSpec k = *this;
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw std::invalid_argument("kernel window h must be positive and finite");
  }
  k.h_ = h;
  return k;
}

double KernelSpec::shape(double s) const {
  switch (family_) {
    case KernelFamily::gaussian:
      return std::exp(-s * s);
    case KernelFamily::histogram:
      return s < 0.0 ? -s / (s * s + epsilon_ * epsilon_) : 0.0;
    case KernelFamily::table: {
      if (s <= nodes_.front()) return values_.front();
      if (s >= nodes_.back()) return values_.back();
      const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), s);
      const std::size_t i = static_cast<std::size_t>(it - nodes_.begin());
      const double w = (s - nodes_[i - 1]) / (nodes_[i] - nodes_[i - 1]);
      return (1.0 - w) * values_[i - 1] + w * values_[i];
    }
  }
  return 0.0;
}

double KernelSpec::shape_derivative(double s) const {
  switch (family_) {
    case KernelFamily::gaussian:
      return -2.0 * s * std::exp(-s * s);
    case KernelFamily::histogram: {
      if (s >= 0.0) return 0.0;
      const double d = s * s + epsilon_ * epsilon_;
      return (s * s - epsilon_ * epsilon_) / (d * d);
    }
    case KernelFamily::table: {
      if (!derivatives_) {
        throw std::logic_error("kernel table has no derivative data");
      }
      const auto& der = *derivatives_;
      if (s <= nodes_.front()) return der.front();
      if (s >= nodes_.back()) return der.back();
      const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), s);
      const std::size_t i = static_cast<std::size_t>(it - nodes_.begin());
      const double w = (s - nodes_[i - 1]) / (nodes_[i] - nodes_[i - 1]);
      return (1.0 - w) * der[i - 1] + w * der[i];
    }
  }
  return 0.0;
}

double KernelSpec::eval(double xi) const { return shape(xi / h_); }

double KernelSpec::eval_derivative(double xi) const { return shape_derivative(xi / h_) / h_; }

double KernelSpec::lipschitz_bound() const {
  switch (family_) {
    case KernelFamily::gaussian:
      // Phi'(s) = (1 - 2t^2) e^{-t^2} with t = s/h. The exact supremum of the
      // modulus is 1 (at t = 0); the h-free bound 1 + 2e^{-3/2} is returned.
      return 1.0 + 2.0 * std::exp(-1.5);
    case KernelFamily::histogram:
      // Phi'(s) = -2 t eps^2 / (t^2 + eps^2)^2 for t < 0, extremal at |t| = eps/sqrt(3).
      return 9.0 / (8.0 * std::sqrt(3.0) * epsilon_);
    case KernelFamily::table: {
      // On each linear piece K = a + b t, Phi' = a + 2 b t is linear in t, so
      // the supremum sits at segment ends; tails contribute |K_end|.
      double bound = std::max(std::abs(values_.front()), std::abs(values_.back()));
      for (std::size_t i = 1; i < nodes_.size(); ++i) {
        const double b = (values_[i] - values_[i - 1]) / (nodes_[i] - nodes_[i - 1]);
        const double a = values_[i - 1] - b * nodes_[i - 1];
        bound = std::max(bound, std::abs(a + 2.0 * b * nodes_[i - 1]));
        bound = std::max(bound, std::abs(a + 2.0 * b * nodes_[i]));
      }
      return bound;
    }
  }
  return 0.0;
}

}  // namespace rnf
