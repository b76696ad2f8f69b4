#pragma once

#include <Eigen/Core>

#include "modrec/grid.hpp"

namespace modrec {

/// Stage-1 output shared by every denoiser.
struct DenoisedModulo {
  UniformGrid grid;
  /// Pre-projection estimates h~(x_i).
  Eigen::VectorXcd raw_estimates;
  /// project(h~(x_i)), unit modulus.
  Eigen::VectorXcd circle_estimates;
  /// phase(circle_estimates[i]) in [0, 1).
  Eigen::VectorXd phases;
  /// Smallest eigenvalue of B_nx over all grid points; +inf for denoisers without a design matrix.
  double min_eig_overall;
};

}  // namespace modrec
