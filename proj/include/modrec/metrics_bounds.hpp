#pragma once

#include <Eigen/Core>

namespace modrec {

struct ErrorReport {
  double wrap_rmse = 0.0;
  double wrap_max = 0.0;
  double aligned_rmse = 0.0;
  double aligned_max = 0.0;
  long long shift_q = 0;
};

/// sqrt(mean of squared wrap-around distances).
double wrap_rmse(const Eigen::Ref<const Eigen::VectorXd>& est, const Eigen::Ref<const Eigen::VectorXd>& truth);
double wrap_max(const Eigen::Ref<const Eigen::VectorXd>& est, const Eigen::Ref<const Eigen::VectorXd>& truth);

struct AlignedError {
  double rmse = 0.0;
  double max_abs = 0.0;
  long long shift_q = 0;
};

/// Best integer shift q in {floor(m), ceil(m)}, m = mean(truth - est), by RMSE of est + q - truth.
AlignedError aligned_error(const Eigen::Ref<const Eigen::VectorXd>& est, const Eigen::Ref<const Eigen::VectorXd>& truth);

/// Errors measured at a fixed integer shift q.
AlignedError error_at_shift(const Eigen::Ref<const Eigen::VectorXd>& est, const Eigen::Ref<const Eigen::VectorXd>& truth,
                            long long q);

/// Wrap metrics between denoised phases and f mod 1, aligned metrics between unwrapped values and f.
ErrorReport error_report(const Eigen::Ref<const Eigen::VectorXd>& phases, const Eigen::Ref<const Eigen::VectorXd>& unwrapped,
                         const Eigen::Ref<const Eigen::VectorXd>& truth);

/// Theoretical constants of the LP(l) denoising analysis. m_prime and lambda0 are user-supplied.
struct TheoryConstants {
  double sigma = 0.12;
  double c = 2.0;
  double m_prime = 1.0;
  double k_max = 0.75;
  double lambda0 = 0.1;
  int l = 2;
  double beta = 2.4;

  void validate() const;
};

/// A(sigma) = sqrt(e^{4 pi^2 sigma^2} - 1) + 1 + e^{2 pi^2 sigma^2}.
double a_sigma(double sigma);

/// Weight bound constant C* = 8 K_max / lambda0.
double c_star(double k_max, double lambda0);
/// Bias coefficient q1 = 4 M' C* / l!.
double q1(const TheoryConstants& k);
/// Stochastic coefficient q2 = 8 c C* A(sigma).
double q2(const TheoryConstants& k);
/// q1 b^beta + q2 sqrt(log n / (n b)).
double bias_variance_bound(const TheoryConstants& k, double b, Eigen::Index n);

/// b* = (c A(sigma) l! / (beta M'))^{2/(2 beta + 1)} (log n / n)^{1/(2 beta + 1)}.
double theoretical_bandwidth(const TheoryConstants& k, Eigen::Index n);

/// delta(n), the high-probability uniform bound on |h^(x_i) - h(x_i)| at b = b*.
double theoretical_delta(const TheoryConstants& k, Eigen::Index n);

/// 1 - e^{-4 pi^2 sigma^2} = E|e^{i 2 pi eta} - e^{-2 pi^2 sigma^2}|^2 for eta ~ N(0, sigma^2).
double circular_noise_variance(double sigma);

}  // namespace modrec
