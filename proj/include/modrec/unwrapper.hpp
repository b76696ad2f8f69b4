#pragma once

#include <Eigen/Core>

#include "modrec/grid.hpp"
#include "modrec/signal_model.hpp"

namespace modrec {

/// Real-valued sample estimates f~(x_i), determined up to one global integer.
struct UnwrappedSamples {
  UniformGrid grid;
  Eigen::VectorXd values;
};

/// Sequential unwrapping: f~_1 = g_1 and f~_i = f~_{i-1} + d_i (+1 if d_i < -1/2, -1 if d_i > 1/2),
/// d_i = g_i - g_{i-1}. |d_i| = 1/2 takes the no-wrap branch.
UnwrappedSamples unwrap(const Eigen::Ref<const Eigen::VectorXd>& phases, const UniformGrid& grid);

/// delta(n) + 2 L / n^{min(beta, 1)} < 1, the condition under which unwrapping is exact.
bool check_unwrap_feasibility(double delta_n, const SmoothnessParams& smoothness, Eigen::Index n);

}  // namespace modrec
