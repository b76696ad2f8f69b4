#pragma once

#include <stdexcept>
#include <string>

namespace modrec {

/// B_nx has a smallest eigenvalue below the configured floor at `x`.
class IllConditioned : public std::runtime_error {
 public:
  IllConditioned(double x, double min_eig, double threshold)
      : std::runtime_error("ill-conditioned local design at x=" + std::to_string(x) +
                           ": min eigenvalue " + std::to_string(min_eig) + " < " +
                           std::to_string(threshold)),
        x_(x),
        min_eig_(min_eig) {}

  double x() const noexcept { return x_; }
  double min_eig() const noexcept { return min_eig_; }

 private:
  double x_;
  double min_eig_;
};

class InsufficientSamples : public std::runtime_error {
 public:
  InsufficientSamples(long n, int degree)
      : std::runtime_error("quasi-interpolant of degree " + std::to_string(degree) + " needs at least " +
                           std::to_string(degree + 1) + " samples, got " + std::to_string(n)),
        n_(n),
        degree_(degree) {}

  long n() const noexcept { return n_; }
  int degree() const noexcept { return degree_; }

 private:
  long n_;
  int degree_;
};

/// Malformed user input: bad function id, kernel name, config field, etc.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace modrec
