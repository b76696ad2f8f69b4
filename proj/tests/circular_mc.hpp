#pragma once

// Stratified Monte Carlo estimates of the circular moments of eta ~ N(0, sigma^2).

#include <boost/math/distributions/normal.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace oracle {

struct CircularMoments {
  std::complex<double> mean;  // E exp(i 2 pi eta)
  double second = 0.0;        // E |exp(i 2 pi eta) - E exp(i 2 pi eta)|^2, with the sample mean
};

/// One draw per probability stratum [k/N, (k+1)/N), mapped through the normal quantile.
inline CircularMoments circular_moments(double sigma, std::size_t draws, std::uint64_t seed) {
  const boost::math::normal_distribution<double> nd(0.0, sigma > 0.0 ? sigma : 1.0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<std::complex<double>> z(draws);
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t k = 0; k < draws; ++k) {
    double u = (static_cast<double>(k) + unif(rng)) / static_cast<double>(draws);
    u = std::clamp(u, 1e-300, 1.0 - 1e-16);
    const double eta = sigma > 0.0 ? boost::math::quantile(nd, u) : 0.0;
    z[k] = std::polar(1.0, 2.0 * std::numbers::pi * eta);
    acc += z[k];
  }
  CircularMoments m;
  m.mean = acc / static_cast<double>(draws);
  for (const auto& v : z) m.second += std::norm(v - m.mean);
  m.second /= static_cast<double>(draws);
  return m;
}

/// True if a and b agree to `digits` significant figures (relative difference below half a unit).
inline bool same_sig_figs(double a, double b, int digits) {
  if (a == b) return true;
  const double scale = std::pow(10.0, std::floor(std::log10(std::abs(b))) - digits + 1);
  return std::abs(a - b) < 0.5 * scale;
}

}  // namespace oracle
