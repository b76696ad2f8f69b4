#pragma once

#include "modrec/denoised.hpp"
#include "modrec/signal_model.hpp"

namespace modrec {

struct KnnConfig {
  /// Neighbour count; ignored when auto_rule is set.
  Eigen::Index k = 1;
  /// k = ceil(0.09 n^{2/3} (log n)^{1/3}).
  bool auto_rule = false;

  Eigen::Index resolve(Eigen::Index n) const;
};

/// ceil(0.09 n^{2/3} (ln n)^{1/3}), clamped to [1, n].
Eigen::Index knn_auto_k(Eigen::Index n);

/// Contiguous window of the k grid indices nearest to index i, ties broken toward the smaller index.
/// Near the boundaries the window shifts so that it always holds exactly k indices.
GridWindow knn_window(Eigen::Index n, Eigen::Index i, Eigen::Index k);

DenoisedModulo knn_denoise(const ModuloSamples& samples, const KnnConfig& cfg);

}  // namespace modrec
