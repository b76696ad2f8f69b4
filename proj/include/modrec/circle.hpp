#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include <algorithm>

namespace modrec {

/// A point of the unit circle T_1 in the complex plane.
template <typename Scalar>
struct CirclePointT {
  Scalar re{1};
  Scalar im{0};

  std::complex<Scalar> to_complex() const { return {re, im}; }
};

/// A value of f mod 1, held in [0, 1).
template <typename Scalar>
class FractionalPhaseT {
 public:
  FractionalPhaseT() = default;
  /// Reduces any real into [0, 1).
  static FractionalPhaseT wrap(Scalar v) {
    FractionalPhaseT p;
    p.t_ = v - std::floor(v);
    if (p.t_ >= Scalar(1)) p.t_ = Scalar(0);
    return p;
  }
  Scalar value() const noexcept { return t_; }

 private:
  Scalar t_{0};
};

using CirclePoint = CirclePointT<double>;
using FractionalPhase = FractionalPhaseT<double>;

/// t -> (cos 2 pi t, sin 2 pi t)
template <typename Scalar>
CirclePointT<Scalar> lift(FractionalPhaseT<Scalar> t) {
  const Scalar angle = Scalar(2) * std::numbers::pi_v<Scalar> * t.value();
  return {std::cos(angle), std::sin(angle)};
}

/// u / |u|, with the origin sent to 1.
template <typename Scalar>
CirclePointT<Scalar> project(Scalar re, Scalar im) {
  const Scalar r = std::hypot(re, im);
  if (r == Scalar(0)) return {Scalar(1), Scalar(0)};
  return {re / r, im / r};
}

template <typename Scalar>
CirclePointT<Scalar> project(const std::complex<Scalar>& u) {
  return project(u.real(), u.imag());
}

/// arg(p) / 2 pi mapped into [0, 1).
template <typename Scalar>
FractionalPhaseT<Scalar> phase(const CirclePointT<Scalar>& p) {
  return FractionalPhaseT<Scalar>::wrap(std::atan2(p.im, p.re) / (Scalar(2) * std::numbers::pi_v<Scalar>));
}

/// Wrap-around distance min{|t - s|, 1 - |t - s|}, valued in [0, 1/2].
template <typename Scalar>
Scalar wrap_distance(FractionalPhaseT<Scalar> t, FractionalPhaseT<Scalar> s) {
  const Scalar d = std::abs(t.value() - s.value());
  return std::min(d, Scalar(1) - d);
}

/// Convenience overload on raw values already in [0, 1).
inline double wrap_distance(double t, double s) {
  return wrap_distance(FractionalPhase::wrap(t), FractionalPhase::wrap(s));
}

}  // namespace modrec
