#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "modrec/errors.hpp"
#include "modrec/grid.hpp"
#include "modrec/lp_denoiser.hpp"
#include "modrec/unwrapper.hpp"

namespace modrec {

/// Linear, local, polynomial-reproducing operator from grid samples to a continuous function on [0,1].
///
/// Every node x_j carries the degree-r Lagrange interpolant P_j through the r+1 nodes nearest x_j
/// (clamped at the ends, ties to the left). On [x_j, x_{j+1}] the estimate is the convex blend
/// (1 - t) P_j + t P_{j+1}, t = n x - (j + 1), which is continuous, interpolatory, and exact
/// on polynomials of degree <= r. Outside [x_1, x_n] the end interpolant is extended.
template <typename Scalar>
class QiOperatorT {
 public:
  QiOperatorT(const UniformGrid& grid, const Eigen::Ref<const VectorX<Scalar>>& samples, int degree)
      : grid_(grid), degree_(degree) {
    const Eigen::Index n = grid.size();
    if (degree < 0) throw InvalidArgument("quasi-interpolant degree must be nonnegative");
    if (n < degree + 1) throw InsufficientSamples(n, degree);
    if (samples.size() != n) throw InvalidArgument("one sample per grid point required");

    // coefficients_.row(j): monomial coefficients of P_j in the offset u = n x - (j + 1).
    coefficients_.resize(n, degree + 1);
    const int p = degree + 1;
    for (Eigen::Index j = 0; j < n; ++j) {
      const Eigen::Index first = window_first(j);
      MatrixX<Scalar> vander(p, p);
      for (int m = 0; m < p; ++m) {
        const Scalar offset = static_cast<Scalar>(first + m - j);
        Scalar pw(1);
        for (int c = 0; c < p; ++c, pw *= offset) vander(m, c) = pw;
      }
      const VectorX<Scalar> c = vander.partialPivLu().solve(samples.segment(first, p));
      coefficients_.row(j) = c.transpose();
      // P_j(x_j) is the sample itself.
      coefficients_(j, 0) = samples[j];
    }
  }

  int degree() const noexcept { return degree_; }
  const UniformGrid& grid() const noexcept { return grid_; }
  const MatrixX<Scalar>& coefficients() const noexcept { return coefficients_; }

  /// First node of the interpolation window attached to node j.
  Eigen::Index window_first(Eigen::Index j) const {
    const Eigen::Index left = (degree_ + 1) / 2;
    return std::clamp<Eigen::Index>(j - left, 0, grid_.size() - 1 - degree_);
  }

  Scalar operator()(Scalar x) const {
    const Eigen::Index n = grid_.size();
    const Scalar pos = x * static_cast<Scalar>(n) - Scalar(1);  // fractional node index
    if (n == 1 || pos <= Scalar(0)) return node_poly(0, pos);
    if (pos >= static_cast<Scalar>(n - 1)) return node_poly(n - 1, pos - static_cast<Scalar>(n - 1));
    const Eigen::Index j = std::min<Eigen::Index>(static_cast<Eigen::Index>(std::floor(pos)), n - 2);
    const Scalar t = pos - static_cast<Scalar>(j);
    return (Scalar(1) - t) * node_poly(j, t) + t * node_poly(j + 1, t - Scalar(1));
  }

 private:
  Scalar node_poly(Eigen::Index j, Scalar u) const {
    Scalar acc(0);
    for (Eigen::Index c = coefficients_.cols() - 1; c >= 0; --c) acc = acc * u + coefficients_(j, c);
    return acc;
  }

  UniformGrid grid_;
  int degree_;
  MatrixX<Scalar> coefficients_;
};

using QiOperator = QiOperatorT<double>;

/// f^ = Q_n(f~).
struct RecoveredFunction {
  QiOperator qi;

  double operator()(double x) const { return qi(x); }
};

inline RecoveredFunction build_qi(const UnwrappedSamples& samples, int degree) {
  return RecoveredFunction{QiOperator(samples.grid, samples.values, degree)};
}

inline double eval_recovered(const RecoveredFunction& f_hat, double x) { return f_hat(x); }

/// Dense table (x_k, f^(x_k)) with x_k = k / (resolution - 1), k = 0..resolution-1.
inline Eigen::MatrixX2d tabulate(const RecoveredFunction& f_hat, Eigen::Index resolution) {
  if (resolution < 2) throw InvalidArgument("tabulation needs at least two points");
  Eigen::MatrixX2d table(resolution, 2);
  for (Eigen::Index k = 0; k < resolution; ++k) {
    const double x = static_cast<double>(k) / static_cast<double>(resolution - 1);
    table(k, 0) = x;
    table(k, 1) = f_hat(x);
  }
  return table;
}

}  // namespace modrec
