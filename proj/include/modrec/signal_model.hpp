#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "modrec/grid.hpp"

namespace modrec {

/// Hoelder class parameters C^{l,alpha}([0,1], M) plus the uniform derivative bound kappa.
struct SmoothnessParams {
  int l = 0;
  double alpha = 1.0;
  double M = 1.0;
  double kappa = 1.0;

  double beta() const noexcept { return static_cast<double>(l) + alpha; }
  /// Constant of |f(x) - f(y)| <= L |x - y|^{min(beta, 1)}.
  double lipschitz_scale() const noexcept { return beta() <= 1.0 ? M : kappa; }

  void validate() const;
};

enum class FunctionKind { paper_fn, constant, linear, poly, cos_k, custom };

struct TestFunction {
  FunctionKind kind = FunctionKind::custom;
  std::string id;
  std::function<double(double)> evaluator;
  SmoothnessParams smoothness;

  double operator()(double x) const { return evaluator(x); }
};

/// f(x) = 4x cos(2 pi x)^2 - 2 sin(2 pi x)^2 + 4.7
TestFunction paper_fn();
TestFunction constant_fn(double c);
/// f(x) = a x + b
TestFunction linear_fn(double a, double b);
/// Coefficients in ascending powers: coeffs[k] multiplies x^k.
TestFunction poly_fn(std::vector<double> coeffs);
/// f(x) = cos(2 pi k x)
TestFunction cos_k_fn(int k);

/// Parses `paper_fn`, `constant:0.25`, `linear:2,0`, `poly:1,0,-2`, `cos_k:3`.
TestFunction parse_test_function(std::string_view id);

enum class CirclePart { real, imag };
/// h_R = cos(2 pi f) or h_I = sin(2 pi f); smoothness is copied from f.
TestFunction circle_component(const TestFunction& f, CirclePart part);

/// Analytic first and second derivatives of paper_fn, used for its kappa witness.
double paper_fn_d1(double x);
double paper_fn_d2(double x);

struct NoiseModel {
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

/// Identifies the generator used for every noise stream.
inline constexpr std::string_view kRngName = "std::mt19937_64+std::normal_distribution";

/// Noise samples eta_1..eta_n ~ N(0, sigma^2), a pure function of (sigma, seed, n).
Eigen::VectorXd gaussian_noise(const NoiseModel& noise, Eigen::Index n);

/// Mathematical modulo 1: result in [0, 1) for every finite v, including negatives.
double frac(double v) noexcept;

struct ModuloSamples {
  UniformGrid grid;
  Eigen::VectorXd values;
};

Eigen::VectorXd evaluate_on_grid(const TestFunction& f, const UniformGrid& grid);

/// y_i = frac(f(x_i) + eta_i).
ModuloSamples sample_modulo(const TestFunction& f, const UniformGrid& grid, const NoiseModel& noise);

/// Empirical lower-bound witness of the Hoelder seminorm of f^(l):
/// max over probe pairs with |x - y| <= 0.1 of |f^(l)(x) - f^(l)(y)| / |x - y|^alpha.
/// f^(l) uses second-order central differences with step 1/n_probe.
double holder_seminorm_estimate(const TestFunction& f, int l, double alpha, int n_probe);

}  // namespace modrec
