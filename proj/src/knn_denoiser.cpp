#include "modrec/knn_denoiser.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "modrec/circle.hpp"

namespace modrec {

Eigen::Index knn_auto_k(Eigen::Index n) {
  const double nd = static_cast<double>(n);
  const double k_star = 0.09 * std::pow(nd, 2.0 / 3.0) * std::cbrt(std::log(nd));
  return std::clamp<Eigen::Index>(static_cast<Eigen::Index>(std::ceil(k_star)), 1, n);
}

Eigen::Index KnnConfig::resolve(Eigen::Index n) const {
  const Eigen::Index kk = auto_rule ? knn_auto_k(n) : k;
  if (kk < 1 || kk > n) throw InvalidArgument("kNN k must lie in [1, n]");
  return kk;
}

GridWindow knn_window(Eigen::Index n, Eigen::Index i, Eigen::Index k) {
  // Nearest-first order is i, i-1, i+1, i-2, i+2, ...: the left side gets the extra slot when k is even.
  const Eigen::Index left = k / 2;
  Eigen::Index first = i - left;
  first = std::clamp<Eigen::Index>(first, 0, n - k);
  return {first, first + k - 1};
}

DenoisedModulo knn_denoise(const ModuloSamples& samples, const KnnConfig& cfg) {
  const Eigen::Index n = samples.grid.size();
  const Eigen::Index k = cfg.resolve(n);

  Eigen::VectorXcd z(n);
  for (Eigen::Index j = 0; j < n; ++j) z[j] = lift(FractionalPhase::wrap(samples.values[j])).to_complex();

  DenoisedModulo out{samples.grid, Eigen::VectorXcd(n), Eigen::VectorXcd(n), Eigen::VectorXd(n),
                     std::numeric_limits<double>::infinity()};
  for (Eigen::Index i = 0; i < n; ++i) {
    const GridWindow w = knn_window(n, i, k);
    const std::complex<double> mean = z.segment(w.first, k).sum() / static_cast<double>(k);
    out.raw_estimates[i] = mean;
    const CirclePoint p = project(mean);
    out.circle_estimates[i] = p.to_complex();
    out.phases[i] = phase(p).value();
  }
  return out;
}

}  // namespace modrec
