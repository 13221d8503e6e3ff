#pragma once

// Tiny dense helpers for the n <= a-few-dozen matrices this library touches:
// row-major storage, no pivoting cleverness needed.

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace rck::detail {

inline double dot_n(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline void matvec(const std::vector<double>& M, std::span<const double> x,
                   int n, std::vector<double>& out) {
  out.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    const double* row = M.data() + static_cast<std::size_t>(i) * n;
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += row[j] * x[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(i)] = s;
  }
}

// largest eigenvalue of a symmetric PSD matrix by power iteration
inline double spectral_norm(const std::vector<double>& M, int n) {
  std::vector<double> v(static_cast<std::size_t>(n),
                        1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> w;
  double lam = 0.0;
  for (int it = 0; it < 100; ++it) {
    matvec(M, v, n, w);
    double norm = std::sqrt(dot_n(w, w));
    if (norm < 1e-300) return 0.0;
    lam = norm;
    for (int i = 0; i < n; ++i)
      v[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(i)] / norm;
  }
  return lam;
}

// lower Cholesky factor of a positive definite matrix
inline std::vector<double> cholesky(const std::vector<double>& M, int n) {
  std::vector<double> L(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = M[static_cast<std::size_t>(i) * n + j];
      for (int k = 0; k < j; ++k)
        s -= L[static_cast<std::size_t>(i) * n + k] *
             L[static_cast<std::size_t>(j) * n + k];
      if (i == j) {
        if (s <= 0.0)
          throw std::runtime_error("cholesky: matrix not positive definite");
        L[static_cast<std::size_t>(i) * n + j] = std::sqrt(s);
      } else {
        L[static_cast<std::size_t>(i) * n + j] =
            s / L[static_cast<std::size_t>(j) * n + j];
      }
    }
  }
  return L;
}

}  // namespace rck::detail
