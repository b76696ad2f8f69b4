#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "modrec/circle.hpp"
#include "modrec/denoised.hpp"
#include "modrec/errors.hpp"
#include "modrec/grid.hpp"
#include "modrec/kernel.hpp"
#include "modrec/signal_model.hpp"

namespace modrec {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Configuration of the order-l local polynomial (LP(l)) smoother.
struct LpConfig {
  int order_l = 2;
  double bandwidth_b = 0.1;
  KernelSpec kernel = make_kernel(KernelId::epanechnikov);
  /// Floor on lambda_min(B_nx); below it the fit is reported as ill-conditioned.
  double min_eig_threshold = 1e-8;

  void validate(Eigen::Index n) const {
    if (order_l < 0) throw InvalidArgument("LP order must be nonnegative");
    if (!(min_eig_threshold > 0.0)) throw InvalidArgument("min_eig_threshold must be positive");
    if (!(bandwidth_b >= 1.0 / (2.0 * static_cast<double>(n)))) {
      throw InvalidArgument("bandwidth must be at least 1/(2n)");
    }
  }
};

/// b = constant * (log n / n)^{beta / (2 beta + 1)}, the tuned rule used in the experiments.
inline double practical_bandwidth(double constant, double beta, Eigen::Index n) {
  const double nd = static_cast<double>(n);
  return constant * std::pow(std::log(nd) / nd, beta / (2.0 * beta + 1.0));
}

/// U(u) = (1, u, u^2/2!, ..., u^l/l!).
template <typename Scalar>
VectorX<Scalar> design_vector(Scalar u, int l) {
  VectorX<Scalar> v(l + 1);
  v[0] = Scalar(1);
  for (int k = 1; k <= l; ++k) v[k] = v[k - 1] * u / Scalar(k);
  return v;
}

/// Indices of grid points with |x_i - x| <= b.
inline GridWindow support_window(const UniformGrid& grid, double x, double b) {
  const double nd = static_cast<double>(grid.size());
  // x_i = (i + 1)/n; widen by one index and filter exactly
  Eigen::Index lo = static_cast<Eigen::Index>(std::floor(nd * (x - b))) - 2;
  Eigen::Index hi = static_cast<Eigen::Index>(std::ceil(nd * (x + b)));
  lo = std::max<Eigen::Index>(lo, 0);
  hi = std::min<Eigen::Index>(hi, grid.size() - 1);
  while (lo <= hi && std::abs(grid.point(lo) - x) > b) ++lo;
  while (hi >= lo && std::abs(grid.point(hi) - x) > b) --hi;
  return {lo, hi};
}

/// B_nx = (1/nb) sum_i U(u_i) U(u_i)^T K(u_i), u_i = (x_i - x)/b.
template <typename Scalar>
MatrixX<Scalar> build_bnx(const UniformGrid& grid, Scalar x, const LpConfig& cfg) {
  const int p = cfg.order_l + 1;
  const Scalar b = static_cast<Scalar>(cfg.bandwidth_b);
  MatrixX<Scalar> bnx = MatrixX<Scalar>::Zero(p, p);
  const GridWindow win = support_window(grid, static_cast<double>(x), cfg.bandwidth_b);
  for (Eigen::Index i = win.first; i <= win.last; ++i) {
    const Scalar u = (static_cast<Scalar>(grid.point(i)) - x) / b;
    const Scalar k = cfg.kernel(u);
    if (k == Scalar(0)) continue;
    const VectorX<Scalar> uv = design_vector(u, cfg.order_l);
    bnx.noalias() += k * uv * uv.transpose();
  }
  return bnx / (static_cast<Scalar>(grid.size()) * b);
}

template <typename Scalar>
Scalar min_eigenvalue(const MatrixX<Scalar>& sym) {
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

/// Effective linear-smoother weights W*_ni(x) of the LP(l) intercept.
template <typename Scalar>
struct LpWeightsT {
  Scalar center_x{0};
  /// Grid indices in the closed window |x_i - x| <= b, ascending.
  std::vector<Eigen::Index> indices;
  VectorX<Scalar> weights;
  Scalar min_eig{0};
};

using LpWeights = LpWeightsT<double>;

/// W*_ni(x) = (1/nb) U(0)^T B_nx^{-1} U(u_i) K(u_i), computed by solving B_nx s = U(0).
/// Throws IllConditioned when lambda_min(B_nx) < cfg.min_eig_threshold.
template <typename Scalar>
LpWeightsT<Scalar> lp_weights(const UniformGrid& grid, Scalar x, const LpConfig& cfg) {
  const MatrixX<Scalar> bnx = build_bnx(grid, x, cfg);
  LpWeightsT<Scalar> out;
  out.center_x = x;
  out.min_eig = min_eigenvalue(bnx);
  if (!(out.min_eig >= static_cast<Scalar>(cfg.min_eig_threshold))) {
    throw IllConditioned(static_cast<double>(x), static_cast<double>(out.min_eig), cfg.min_eig_threshold);
  }

  const VectorX<Scalar> e0 = design_vector(Scalar(0), cfg.order_l);
  const VectorX<Scalar> s = bnx.ldlt().solve(e0);

  const Scalar b = static_cast<Scalar>(cfg.bandwidth_b);
  const Scalar nb = static_cast<Scalar>(grid.size()) * b;
  const GridWindow win = support_window(grid, static_cast<double>(x), cfg.bandwidth_b);
  out.indices.reserve(static_cast<std::size_t>(win.size()));
  out.weights.resize(win.size());
  for (Eigen::Index i = win.first; i <= win.last; ++i) {
    const Scalar u = (static_cast<Scalar>(grid.point(i)) - x) / b;
    out.indices.push_back(i);
    out.weights[i - win.first] = s.dot(design_vector(u, cfg.order_l)) * cfg.kernel(u) / nb;
  }
  return out;
}

/// Minimiser of sum_i |z_i - theta^T U(u_i)|^2 K(u_i) over complex theta, from the normal equations.
/// The intercept theta[0] equals sum_i z_i W*_ni(x).
template <typename Scalar>
VectorX<std::complex<Scalar>> weighted_ls_solve(const Eigen::Ref<const VectorX<std::complex<Scalar>>>& targets,
                                                const UniformGrid& grid, Scalar x, const LpConfig& cfg) {
  if (targets.size() != grid.size()) throw InvalidArgument("targets must have one value per grid point");
  const int p = cfg.order_l + 1;
  const Scalar b = static_cast<Scalar>(cfg.bandwidth_b);
  MatrixX<Scalar> gram = MatrixX<Scalar>::Zero(p, p);
  VectorX<std::complex<Scalar>> rhs = VectorX<std::complex<Scalar>>::Zero(p);
  const GridWindow win = support_window(grid, static_cast<double>(x), cfg.bandwidth_b);
  for (Eigen::Index i = win.first; i <= win.last; ++i) {
    const Scalar u = (static_cast<Scalar>(grid.point(i)) - x) / b;
    const Scalar k = cfg.kernel(u);
    if (k == Scalar(0)) continue;
    const VectorX<Scalar> uv = design_vector(u, cfg.order_l);
    gram.noalias() += k * uv * uv.transpose();
    rhs += (k * targets[i]) * uv.template cast<std::complex<Scalar>>();
  }

  const Scalar nb = static_cast<Scalar>(grid.size()) * b;
  const Scalar lam = min_eigenvalue<Scalar>(gram / nb);
  if (!(lam >= static_cast<Scalar>(cfg.min_eig_threshold))) {
    throw IllConditioned(static_cast<double>(x), static_cast<double>(lam), cfg.min_eig_threshold);
  }
  return gram.template cast<std::complex<Scalar>>().ldlt().solve(rhs);
}

/// Stage 1: lift y_j to the circle, take the LP(l) intercept at every grid point, project, read the phase.
inline DenoisedModulo denoise(const ModuloSamples& samples, const LpConfig& cfg) {
  const UniformGrid& grid = samples.grid;
  const Eigen::Index n = grid.size();
  cfg.validate(n);

  Eigen::VectorXcd z(n);
  for (Eigen::Index j = 0; j < n; ++j) z[j] = lift(FractionalPhase::wrap(samples.values[j])).to_complex();

  DenoisedModulo out{grid, Eigen::VectorXcd(n), Eigen::VectorXcd(n), Eigen::VectorXd(n),
                     std::numeric_limits<double>::infinity()};
  for (Eigen::Index i = 0; i < n; ++i) {
    const LpWeights w = lp_weights(grid, grid.point(i), cfg);
    std::complex<double> acc = 0.0;
    for (std::size_t k = 0; k < w.indices.size(); ++k) acc += z[w.indices[k]] * w.weights[static_cast<Eigen::Index>(k)];
    out.raw_estimates[i] = acc;
    const CirclePoint p = project(acc);
    out.circle_estimates[i] = p.to_complex();
    out.phases[i] = phase(p).value();
    out.min_eig_overall = std::min(out.min_eig_overall, w.min_eig);
  }
  return out;
}

}  // namespace modrec
