#include "modrec/unwrapper.hpp"

#include <algorithm>
#include <cmath>

namespace modrec {

UnwrappedSamples unwrap(const Eigen::Ref<const Eigen::VectorXd>& phases, const UniformGrid& grid) {
  if (phases.size() != grid.size()) throw InvalidArgument("one phase per grid point required");
  // Track the integer offset so that f~_i - g_i is an exact integer.
  Eigen::VectorXd f(phases.size());
  long long offset = 0;
  f[0] = phases[0];
  for (Eigen::Index i = 1; i < phases.size(); ++i) {
    const double d = phases[i] - phases[i - 1];
    if (d < -0.5) {
      ++offset;
    } else if (d > 0.5) {
      --offset;
    }
    f[i] = phases[i] + static_cast<double>(offset);
  }
  return {grid, std::move(f)};
}

bool check_unwrap_feasibility(double delta_n, const SmoothnessParams& smoothness, Eigen::Index n) {
  if (delta_n < 0.0) throw InvalidArgument("delta(n) must be nonnegative");
  const double nd = static_cast<double>(n);
  return delta_n + 2.0 * smoothness.lipschitz_scale() / std::pow(nd, std::min(smoothness.beta(), 1.0)) < 1.0;
}

}  // namespace modrec
