#pragma once

#include <Eigen/Core>

#include "modrec/errors.hpp"

namespace modrec {

/// Sample locations x_i = i/n, i = 1..n.
class UniformGrid {
 public:
  explicit UniformGrid(Eigen::Index n) : n_(n) {
    if (n < 1) throw InvalidArgument("grid size must be positive");
  }

  Eigen::Index size() const noexcept { return n_; }
  double spacing() const noexcept { return 1.0 / static_cast<double>(n_); }

  /// 0-based access: point(0) = 1/n, point(n-1) = 1.
  double point(Eigen::Index i) const noexcept {
    return static_cast<double>(i + 1) / static_cast<double>(n_);
  }

  Eigen::VectorXd points() const {
    Eigen::VectorXd x(n_);
    for (Eigen::Index i = 0; i < n_; ++i) x[i] = point(i);
    return x;
  }

  bool operator==(const UniformGrid&) const = default;

 private:
  Eigen::Index n_;
};

/// Closed 0-based index range [first, last]; empty when first > last.
struct GridWindow {
  Eigen::Index first = 0;
  Eigen::Index last = -1;

  bool empty() const noexcept { return first > last; }
  Eigen::Index size() const noexcept { return empty() ? 0 : last - first + 1; }
};

}  // namespace modrec
