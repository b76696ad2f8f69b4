#include "modrec/metrics_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "modrec/circle.hpp"
#include "modrec/errors.hpp"

namespace modrec {

namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

void check_lengths(Eigen::Index a, Eigen::Index b) {
  if (a != b || a < 1) throw InvalidArgument("error metrics need two nonempty vectors of equal length");
}

double factorial(int l) {
  double r = 1.0;
  for (int k = 2; k <= l; ++k) r *= k;
  return r;
}

double log_ratio(Eigen::Index n) {
  if (n < 2) throw InvalidArgument("n must be at least 2");
  const double nd = static_cast<double>(n);
  return std::log(nd) / nd;
}

}  // namespace

double wrap_rmse(const Eigen::Ref<const Eigen::VectorXd>& est, const Eigen::Ref<const Eigen::VectorXd>& truth) {
  check_lengths(est.size(), truth.size());
  double acc = 0.0;
  for (Eigen::Index i = 0; i < est.size(); ++i) {
    const double d = wrap_distance(est[i], truth[i]);
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(est.size()));
}

double wrap_max(const Eigen::Ref<const Eigen::VectorXd>& est, const Eigen::Ref<const Eigen::VectorXd>& truth) {
  check_lengths(est.size(), truth.size());
  double m = 0.0;
  for (Eigen::Index i = 0; i < est.size(); ++i) m = std::max(m, wrap_distance(est[i], truth[i]));
  return m;
}

AlignedError error_at_shift(const Eigen::Ref<const Eigen::VectorXd>& est, const Eigen::Ref<const Eigen::VectorXd>& truth,
                            long long q) {
  check_lengths(est.size(), truth.size());
  const Eigen::ArrayXd e = (est.array() + static_cast<double>(q)) - truth.array();
  return {std::sqrt(e.square().mean()), e.abs().maxCoeff(), q};
}

AlignedError aligned_error(const Eigen::Ref<const Eigen::VectorXd>& est, const Eigen::Ref<const Eigen::VectorXd>& truth) {
  check_lengths(est.size(), truth.size());
  const double m = (truth - est).mean();
  const auto lo = static_cast<long long>(std::floor(m));
  const auto hi = static_cast<long long>(std::ceil(m));
  const AlignedError a = error_at_shift(est, truth, lo);
  if (hi == lo) return a;
  const AlignedError b = error_at_shift(est, truth, hi);
  return b.rmse < a.rmse ? b : a;
}

ErrorReport error_report(const Eigen::Ref<const Eigen::VectorXd>& phases, const Eigen::Ref<const Eigen::VectorXd>& unwrapped,
                         const Eigen::Ref<const Eigen::VectorXd>& truth) {
  Eigen::VectorXd truth_mod(truth.size());
  for (Eigen::Index i = 0; i < truth.size(); ++i) truth_mod[i] = FractionalPhase::wrap(truth[i]).value();
  ErrorReport r;
  r.wrap_rmse = wrap_rmse(phases, truth_mod);
  r.wrap_max = wrap_max(phases, truth_mod);
  const AlignedError a = aligned_error(unwrapped, truth);
  r.aligned_rmse = a.rmse;
  r.aligned_max = a.max_abs;
  r.shift_q = a.shift_q;
  return r;
}

void TheoryConstants::validate() const {
  if (!(c >= 2.0)) throw InvalidArgument("probability exponent c must be at least 2");
  if (!(sigma >= 0.0)) throw InvalidArgument("sigma must be nonnegative");
  if (!(m_prime > 0.0 && k_max > 0.0 && lambda0 > 0.0 && beta > 0.0)) {
    throw InvalidArgument("m_prime, k_max, lambda0 and beta must be positive");
  }
  if (l < 0) throw InvalidArgument("l must be nonnegative");
}

double a_sigma(double sigma) {
  if (!(sigma >= 0.0)) throw InvalidArgument("sigma must be nonnegative");
  const double s2 = kPi2 * sigma * sigma;
  return std::sqrt(std::expm1(4.0 * s2)) + 1.0 + std::exp(2.0 * s2);
}

double c_star(double k_max, double lambda0) { return 8.0 * k_max / lambda0; }

double q1(const TheoryConstants& k) {
  k.validate();
  return 4.0 * k.m_prime * c_star(k.k_max, k.lambda0) / factorial(k.l);
}

double q2(const TheoryConstants& k) {
  k.validate();
  return 8.0 * k.c * c_star(k.k_max, k.lambda0) * a_sigma(k.sigma);
}

double bias_variance_bound(const TheoryConstants& k, double b, Eigen::Index n) {
  const double nd = static_cast<double>(n);
  return q1(k) * std::pow(b, k.beta) + q2(k) * std::sqrt(std::log(nd) / (nd * b));
}

double theoretical_bandwidth(const TheoryConstants& k, Eigen::Index n) {
  k.validate();
  const double two_beta_1 = 2.0 * k.beta + 1.0;
  const double prefactor = k.c * a_sigma(k.sigma) * factorial(k.l) / (k.beta * k.m_prime);
  return std::pow(prefactor, 2.0 / two_beta_1) * std::pow(log_ratio(n), 1.0 / two_beta_1);
}

double theoretical_delta(const TheoryConstants& k, Eigen::Index n) {
  k.validate();
  const double beta = k.beta;
  const double two_beta_1 = 2.0 * beta + 1.0;
  const double bias_group = 32.0 * k.m_prime * k.k_max / (factorial(k.l) * k.lambda0);
  const double noise_group = 64.0 * k.c * k.k_max * a_sigma(k.sigma) / k.lambda0;
  const double bracket = std::pow(2.0 * beta, -2.0 * beta / two_beta_1) + std::pow(2.0 * beta, 1.0 / two_beta_1);
  return std::pow(bias_group, 1.0 / two_beta_1) * std::pow(noise_group, 2.0 * beta / two_beta_1) * bracket *
         std::pow(log_ratio(n), beta / two_beta_1);
}

double circular_noise_variance(double sigma) { return -std::expm1(-4.0 * kPi2 * sigma * sigma); }

}  // namespace modrec
