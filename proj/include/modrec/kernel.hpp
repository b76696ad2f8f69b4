#pragma once

#include <cmath>
#include <string>
#include <string_view>

#include "modrec/errors.hpp"

namespace modrec {

enum class KernelId { epanechnikov, box, triangular };

/// Compactly supported kernel with declared constants
/// k_min 1{|u| <= delta} <= K(u) <= k_max 1{|u| <= 1}.
struct KernelSpec {
  KernelId id = KernelId::epanechnikov;
  double k_min = 0.5625;
  double k_max = 0.75;
  double delta = 0.5;

  template <typename Scalar>
  Scalar operator()(Scalar u) const {
    const Scalar a = std::abs(u);
    if (a > Scalar(1)) return Scalar(0);
    switch (id) {
      case KernelId::epanechnikov:
        return Scalar(0.75) * (Scalar(1) - u * u);
      case KernelId::box:
        return Scalar(0.5);
      case KernelId::triangular:
        return Scalar(1) - a;
    }
    return Scalar(0);
  }
};

inline KernelSpec make_kernel(KernelId id) {
  switch (id) {
    case KernelId::epanechnikov:
      return {KernelId::epanechnikov, 0.5625, 0.75, 0.5};
    case KernelId::box:
      return {KernelId::box, 0.5, 0.5, 1.0};
    case KernelId::triangular:
      return {KernelId::triangular, 0.5, 1.0, 0.5};
  }
  throw InvalidArgument("unknown kernel id");
}

inline KernelSpec parse_kernel(std::string_view name) {
  if (name == "epanechnikov") return make_kernel(KernelId::epanechnikov);
  if (name == "box") return make_kernel(KernelId::box);
  if (name == "triangular") return make_kernel(KernelId::triangular);
  throw InvalidArgument("unknown kernel '" + std::string(name) + "'");
}

inline std::string_view kernel_name(KernelId id) {
  switch (id) {
    case KernelId::epanechnikov:
      return "epanechnikov";
    case KernelId::box:
      return "box";
    case KernelId::triangular:
      return "triangular";
  }
  return "unknown";
}

template <typename Scalar>
Scalar eval(const KernelSpec& k, Scalar u) {
  return k(u);
}

}  // namespace modrec
