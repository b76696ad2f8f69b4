#pragma once

// Independent reference computations for the test suites. Nothing here calls into the
// library's numerical routines beyond plain data types.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "modrec/kernel.hpp"

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

inline double factorial(int k) { return std::tgamma(k + 1.0); }

/// B_nx by explicit triple loop over grid points and matrix entries.
inline Matrix naive_bnx(int n, double x, double b, int l, const modrec::KernelSpec& kernel) {
  Matrix m(l + 1, std::vector<double>(l + 1, 0.0));
  for (int i = 1; i <= n; ++i) {
    const double u = (static_cast<double>(i) / n - x) / b;
    const double k = kernel(u);
    for (int r = 0; r <= l; ++r) {
      for (int c = 0; c <= l; ++c) m[r][c] += std::pow(u, r) / factorial(r) * std::pow(u, c) / factorial(c) * k;
    }
  }
  for (auto& row : m) {
    for (auto& v : row) v /= n * b;
  }
  return m;
}

inline double determinant(const Matrix& a) {
  const std::size_t n = a.size();
  if (n == 1) return a[0][0];
  double det = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    Matrix minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<double> row;
      for (std::size_t cc = 0; cc < n; ++cc) {
        if (cc != c) row.push_back(a[r][cc]);
      }
      minor.push_back(row);
    }
    det += ((c % 2) ? -1.0 : 1.0) * a[0][c] * determinant(minor);
  }
  return det;
}

/// Cramer's rule for a small real system with complex right-hand side.
inline std::vector<std::complex<double>> cramer_solve(const Matrix& a, const std::vector<std::complex<double>>& rhs) {
  const double d = determinant(a);
  std::vector<std::complex<double>> x(a.size());
  for (std::size_t c = 0; c < a.size(); ++c) {
    Matrix re = a;
    Matrix im = a;
    for (std::size_t r = 0; r < a.size(); ++r) {
      re[r][c] = rhs[r].real();
      im[r][c] = rhs[r].imag();
    }
    x[c] = {determinant(re) / d, determinant(im) / d};
  }
  return x;
}

/// Normal equations of the kernel-weighted least-squares fit, built without the library.
inline void normal_equations(int n, double x, double b, int l, const modrec::KernelSpec& kernel,
                             const std::vector<std::complex<double>>& z, Matrix& gram,
                             std::vector<std::complex<double>>& rhs) {
  gram.assign(l + 1, std::vector<double>(l + 1, 0.0));
  rhs.assign(l + 1, 0.0);
  for (int i = 1; i <= n; ++i) {
    const double u = (static_cast<double>(i) / n - x) / b;
    const double k = kernel(u);
    if (k == 0.0) continue;
    for (int r = 0; r <= l; ++r) {
      const double ur = std::pow(u, r) / factorial(r);
      rhs[r] += k * ur * z[i - 1];
      for (int c = 0; c <= l; ++c) gram[r][c] += k * ur * std::pow(u, c) / factorial(c);
    }
  }
}

/// The k indices nearest to i, by sorting on (|j - i|, j).
inline std::vector<long> brute_knn(long n, long i, long k) {
  std::vector<long> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0L);
  std::stable_sort(idx.begin(), idx.end(), [i](long a, long b) {
    const long da = std::abs(a - i);
    const long db = std::abs(b - i);
    return da != db ? da < db : a < b;
  });
  idx.resize(static_cast<std::size_t>(k));
  std::sort(idx.begin(), idx.end());
  return idx;
}

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t m = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace oracle
